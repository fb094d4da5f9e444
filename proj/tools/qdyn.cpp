#include <iostream>

#include "qdyn/cli.hpp"

int main(int argc, char** argv) { return qdyn::run_cli(argc, argv, std::cout, std::cerr); }
