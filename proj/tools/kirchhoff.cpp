#include <iostream>

#include "kirchhoff/cli_report.hpp"

int main(int argc, char** argv) { return kirchhoff::cli::main_entry(argc, argv, std::cout, std::cerr); }
