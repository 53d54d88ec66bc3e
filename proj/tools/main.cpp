#include <iostream>

#include "syncarena/cli.hpp"

int main(int argc, char** argv) { return syncarena::run_cli(argc, argv, std::cout, std::cerr); }
