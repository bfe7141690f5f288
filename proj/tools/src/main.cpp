#include "gmfc_tools/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return gmfc::tools::run_cli(argc, argv, std::cout, std::cerr); }
