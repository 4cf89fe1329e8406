#include <iostream>

#include "nelsonlab/cli/app.hpp"

int main(int argc, char** argv) { return nelsonlab::cli::main_entry(argc, argv, std::cout, std::cerr); }
