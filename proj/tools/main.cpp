#include <iostream>
#include <string>
#include <vector>

#include "ranpower/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ranpower::run_cli(args, std::cout, std::cerr);
}
