#include <iostream>

#include "matmcd/cli/cli.hpp"

int main(int argc, char** argv) { return matmcd::cli::cli_dispatch(argc, argv, std::cout, std::cerr); }
