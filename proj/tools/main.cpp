#include <iostream>

#include "mecsdr/cli.hpp"

int main(int argc, char** argv) { return mecsdr::run_cli(argc, argv, std::cout, std::cerr); }
