#include <iostream>

#include "ufsym/cli.hpp"

int main(int argc, char** argv) { return ufsym::cli::run(argc, argv, std::cout, std::cerr); }
