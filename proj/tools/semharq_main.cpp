#include <iostream>

#include "semharq/bench/cli.hpp"

int main(int argc, char** argv) {
  return semharq::bench::cli_main(argc, argv, std::cout, std::cerr);
}
