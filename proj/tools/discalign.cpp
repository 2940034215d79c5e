#include "discalign/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return discalign::run_cli(argc, argv, std::cout, std::cerr);
}
