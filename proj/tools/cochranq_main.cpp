#include <iostream>

#include "cochranq/cli.hpp"

int main(int argc, char** argv) {
  return cochranq::cli::run(argc, argv, std::cout, std::cerr);
}
