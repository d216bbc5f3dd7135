#pragma once

#include <iosfwd>

namespace llano::cli {

// Entry point for the `llano` tool. Exit codes: 0 success, 1 runtime
// failure, 2 usage/config/input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llano::cli
