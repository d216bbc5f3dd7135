#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace llano::digest {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace llano::digest
