#include <iostream>

#include "fogdrip/cli.hpp"

int main(int argc, char** argv) { return fogdrip::cli_main(argc, argv, std::cout, std::cerr); }
