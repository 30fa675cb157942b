#include <iostream>

#include "ldacert/cli.hpp"

int main(int argc, char** argv) { return ldacert::run_cli(argc, argv, std::cout, std::cerr); }
