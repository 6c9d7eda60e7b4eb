#include <iostream>

#include "handover/cli.hpp"

int main(int argc, char** argv) { return handover::run_cli(argc, argv, std::cout, std::cerr); }
