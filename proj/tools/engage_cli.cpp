#include <iostream>
#include <string>
#include <vector>

#include "engage/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return engage::run_cli(args, std::cout, std::cerr);
}
