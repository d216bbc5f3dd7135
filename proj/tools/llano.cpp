#include <iostream>

#include "llano/cli.hpp"

int main(int argc, char** argv) { return llano::cli::run(argc, argv, std::cout, std::cerr); }
