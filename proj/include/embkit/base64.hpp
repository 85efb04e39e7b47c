#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace embkit {

// RFC 4648 base64 with padding; the dump format stores raw little-endian
// float32 payloads this way.
std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace embkit
