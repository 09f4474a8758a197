#include <iostream>

#include "mrchialvo_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mrchialvo::cli::run(args, std::cout, std::cerr);
}
