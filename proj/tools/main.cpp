#include <iostream>

#include "roacert/cli.hpp"

int main(int argc, char** argv) { return roacert::cli::run(argc, argv, std::cout, std::cerr); }
