#include "tuning/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return tuning::cli::run(argc, argv, std::cout, std::cerr); }
