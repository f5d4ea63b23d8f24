#include <iostream>

#include "lindchain/cli.hpp"

int main(int argc, char** argv) { return lindchain::cli::run(argc, argv, std::cout, std::cerr); }
