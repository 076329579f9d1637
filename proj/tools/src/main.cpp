#include <iostream>

#include "pcfpair/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pcfpair::cli::run(args, std::cout, std::cerr);
}
