#include <iostream>

#include "adiaband_cli/app.hpp"

int main(int argc, char** argv) { return adiaband::cli::main_entry(argc, argv, std::cout, std::cerr); }
