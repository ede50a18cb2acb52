#include <iostream>

#include "mvdeg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mvdeg::cli::run(args, std::cout, std::cerr);
}
