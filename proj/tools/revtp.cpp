#include <iostream>

#include "revtp/cli.hpp"

int main(int argc, char** argv) { return revtp::cli_run(argc, argv, std::cout, std::cerr); }
