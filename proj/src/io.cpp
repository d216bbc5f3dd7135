#include "llano/io.hpp"

#include <fstream>
#include <sstream>

#include "llano/error.hpp"

namespace llano::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::IoError, "read failed for " + path.string());
  }
  return buf.str();
}

namespace {

void write_with_mode(const std::filesystem::path& path, std::string_view data,
                     std::ios::openmode mode) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | mode);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorKind::IoError, "write failed for " + path.string());
  }
}

}  // namespace

void write_file(const std::filesystem::path& path, std::string_view data) {
  write_with_mode(path, data, std::ios::trunc);
}

void append_file(const std::filesystem::path& path, std::string_view data) {
  write_with_mode(path, data, std::ios::app);
}

}  // namespace llano::io
