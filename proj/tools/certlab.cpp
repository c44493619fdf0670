#include <iostream>
#include <string>
#include <vector>

#include "certlab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const certlab::cli::CommandResult r = certlab::cli::run(args, std::cin);
  std::cout << certlab::cli::render(r);
  std::cerr << r.diagnostics;
  return r.exit_code;
}
