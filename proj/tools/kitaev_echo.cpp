#include <iostream>
#include <string>
#include <vector>

#include "kitaev/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kitaev::cli::run(args, std::cout, std::cerr);
}
