#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace proedscan {

// Lowercase hex SHA-256 of a byte buffer. Content-addressed asset ids and
// config/split digests all go through here.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(const std::string& text);

} // namespace proedscan
