#include <iostream>

#include "modcomm_cli/commands.hpp"

int main(int argc, char** argv) { return modcomm::cli::run_cli(argc, argv, std::cout, std::cerr); }
