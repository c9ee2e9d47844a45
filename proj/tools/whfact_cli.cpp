#include <iostream>
#include <string>
#include <vector>

#include "whf/cli/run.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return whf::cli::run(args, std::cout, std::cerr);
}
