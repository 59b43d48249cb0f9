#include "yamabe/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return yamabe::cli::run(argc, argv, std::cout, std::cerr); }
