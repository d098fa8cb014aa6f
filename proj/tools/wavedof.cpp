#include <iostream>

#include "wavedof/cli/app.hpp"

int main(int argc, char** argv) { return wavedof::cli::run(argc, argv, std::cout, std::cerr); }
