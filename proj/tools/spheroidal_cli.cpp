#include <iostream>

#include "spheroidal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spheroidal::run_cli(args, std::cout, std::cerr);
}
