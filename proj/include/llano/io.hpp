#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace llano::io {

// Both throw Error(IoError) naming the path.
std::string read_file(const std::filesystem::path& path);
// Creates missing parent directories.
void write_file(const std::filesystem::path& path, std::string_view data);
void append_file(const std::filesystem::path& path, std::string_view data);

}  // namespace llano::io
