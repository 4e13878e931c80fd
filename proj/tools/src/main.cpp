#include "bubbly/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return bubbly::cli::run(argc, argv, std::cout, std::cerr); }
