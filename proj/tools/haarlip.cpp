#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return haarlip::cli::main(argc, argv, std::cout, std::cerr); }
