#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace obfkit::util {

// SHA-256 of a byte string, returned as lowercase hex.
std::string sha256_hex(std::string_view data);

// First 16 hex chars of sha256; enough for content-addressed cache keys.
std::string short_digest(std::string_view data);

}  // namespace obfkit::util
