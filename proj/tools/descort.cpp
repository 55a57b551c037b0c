#include <iostream>

#include "descort/cli.hpp"

int main(int argc, char** argv) { return descort::run_cli(argc, argv, std::cout, std::cerr); }
