#include <iostream>

#include "ratdet/cli.hpp"

int main(int argc, char** argv) { return ratdet::cli_main(argc, argv, std::cout, std::cerr); }
