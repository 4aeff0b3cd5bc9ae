#include <iostream>

#include "pstlab_cli.hpp"

int main(int argc, char** argv) { return pstlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
