#include <iostream>
#include <string>
#include <vector>

#include "stochcone/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return stochcone::run_cli(args, std::cout, std::cerr);
}
