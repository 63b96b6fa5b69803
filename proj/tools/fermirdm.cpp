#include <iostream>

#include "fermirdm/cli.hpp"

int main(int argc, char** argv) { return fermirdm::cli::run(argc, argv, std::cout, std::cerr); }
