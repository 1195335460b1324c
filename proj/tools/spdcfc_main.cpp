#include <iostream>
#include <string>
#include <vector>

#include "spdcfc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spdcfc::cli::run(args, std::cout, std::cerr);
}
