#include <iostream>

#include "glnematic/cli.hpp"

int main(int argc, char** argv) { return glnematic::cli_main(argc, argv, std::cout, std::cerr); }
