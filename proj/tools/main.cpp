#include <iostream>

#include "llpo/cli.hpp"

int main(int argc, char** argv) { return llpo::run_cli(argc, argv, std::cout, std::cerr); }
