#include <iostream>

#include "banditkit/cli.hpp"

int main(int argc, char** argv) {
  return banditkit::run_cli(argc, argv, std::cout, std::cerr);
}
