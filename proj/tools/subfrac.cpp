#include "subfrac_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return subfrac::cli::run(argc, argv, std::cout, std::cerr); }
