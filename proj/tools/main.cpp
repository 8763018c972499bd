#include "trimmer/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return trimmer::cli::run(argc, argv, std::cout, std::cerr); }
