#include <iostream>

#include "tsera/cli.hpp"

int main(int argc, char** argv) {
  return tsera::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
