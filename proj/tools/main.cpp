#include <iostream>
#include <string>
#include <vector>

#include "mapf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mapf::run_cli(args, std::cout, std::cerr);
}
