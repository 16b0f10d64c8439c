#include <iostream>

#include "ijse_cli/commands.hpp"

int main(int argc, char** argv) { return ijse::cli::run(argc, argv, std::cout, std::cerr); }
