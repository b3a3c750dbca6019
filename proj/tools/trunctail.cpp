#include <iostream>
#include <string>
#include <vector>

#include "trunctail/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trunctail::cli::run(args, std::cout, std::cerr);
}
