#include <iostream>
#include <string>
#include <vector>

#include "gzsl/cli/app.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return gzsl::cli::run_subcommand(args, std::cout, std::cerr);
}
