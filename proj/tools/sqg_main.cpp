#include <iostream>
#include <string>
#include <vector>

#include "sqg_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sqg::cli::run_cli(args, std::cout, std::cerr);
}
