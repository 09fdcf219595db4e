#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return odmr::cli::run_cli(args, std::cout, std::cerr);
}
