#include <iostream>

#include "wntest/cli.hpp"

int main(int argc, char** argv) { return wntest::run_cli(argc, argv, std::cout, std::cerr); }
