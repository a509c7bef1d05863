#include <iostream>

#include "slt/cli/cli.hpp"

int main(int argc, char** argv) { return slt::cli::main_entry(argc, argv, std::cout, std::cerr); }
