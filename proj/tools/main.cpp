#include <iostream>
#include <string>
#include <vector>

#include "rank2lu/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rank2lu::cli::run(args, std::cout, std::cerr);
}
