#include <iostream>
#include <string>
#include <vector>

#include "timebin/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return timebin::cli_main(args, std::cout, std::cerr);
}
