#include "embkit/text.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <system_error>

#include "embkit/error.hpp"

namespace embkit {

namespace {

template <typename T>
std::string format_shortest(T v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw ParseError("float formatting failed");
    return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view token, const char* what) {
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || token.empty()) {
        throw ParseError(std::string("cannot parse ") + what + " from '" +
                         std::string(token) + "'");
    }
    return value;
}

}  // namespace

std::string format_float(float v) { return format_shortest(v); }
std::string format_double(double v) { return format_shortest(v); }

float parse_float(std::string_view token) {
    return parse_number<float>(token, "float");
}

double parse_double(std::string_view token) {
    return parse_number<double>(token, "double");
}

std::int64_t parse_int(std::string_view token) {
    return parse_number<std::int64_t>(token, "integer");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace embkit
