#include <iostream>
#include <string>
#include <vector>

#include "zenosplit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zenosplit::cli::dispatch(args, std::cout, std::cerr);
}
