#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return fuzzyfield::cli::run_cli(argc, argv, std::cout, std::cerr); }
