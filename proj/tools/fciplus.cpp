#include "fciplus/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fciplus::run_cli(argc, argv, std::cout, std::cerr); }
