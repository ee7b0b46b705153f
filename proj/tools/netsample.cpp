#include <iostream>

#include "netsample/cli.hpp"

int main(int argc, char** argv) { return netsample::cli::run(argc, argv, std::cout, std::cerr); }
