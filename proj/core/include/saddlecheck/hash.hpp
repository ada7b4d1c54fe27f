#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace saddle {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(std::string_view bytes);

}  // namespace saddle
