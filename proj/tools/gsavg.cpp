#include <iostream>
#include <string>
#include <vector>

#include "gsavg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gsavg::run_cli(args, std::cout, std::cerr);
}
