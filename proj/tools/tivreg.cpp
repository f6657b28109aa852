#include <iostream>

#include "tivreg/cli.hpp"

int main(int argc, char** argv) { return tivreg::cli_main(argc, argv, std::cout, std::cerr); }
