#include "bubblefl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bfl::run_cli(argc, argv, std::cout, std::cerr); }
