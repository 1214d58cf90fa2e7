#include <iostream>

#include "lpp/cli/runner.hpp"

int main(int argc, char** argv) {
  return lpp::cli::main_entry(argc, argv, std::cout, std::cerr);
}
