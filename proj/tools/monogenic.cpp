#include <iostream>

#include "monogenic/cli.hpp"

int main(int argc, char** argv) { return monogenic::cli::run(argc, argv, std::cout, std::cerr); }
