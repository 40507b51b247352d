#include <iostream>

#include "lndkit/cli/app.hpp"

int main(int argc, char** argv) { return lndkit::cli::run_cli(argc, argv, std::cout, std::cerr); }
