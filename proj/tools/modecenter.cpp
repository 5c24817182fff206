#include <iostream>

#include "modecenter/cli.hpp"

int main(int argc, char** argv) {
  return modecenter::cli::run(argc, argv, std::cout, std::cerr);
}
