#include <iostream>

#include "wag/cli.hpp"

int main(int argc, char** argv) {
  return wag::cli::run(argc, argv, std::cout, std::cerr);
}
