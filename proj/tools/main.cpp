#include <iostream>

#include "tered/cli.hpp"

int main(int argc, char** argv) { return tered::cli::run(argc, argv, std::cout, std::cerr); }
