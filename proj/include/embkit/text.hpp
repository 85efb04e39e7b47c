#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace embkit {

// Shortest decimal form that parses back to the identical value.
std::string format_float(float v);
std::string format_double(double v);

// Strict parse of a whole token; throws ParseError on trailing garbage or
// empty input. Accepts inf/nan spellings (callers reject non-finite values
// where their format forbids them).
float parse_float(std::string_view token);
double parse_double(std::string_view token);
std::int64_t parse_int(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);
std::vector<std::string_view> split_whitespace(std::string_view line);
std::string_view trim(std::string_view s);

}  // namespace embkit
