#include <iostream>

#include "shiftlab/cli.hpp"

int main(int argc, char** argv) { return shiftlab::cli_main(argc, argv, std::cout, std::cerr); }
