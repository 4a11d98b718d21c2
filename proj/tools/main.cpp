#include <iostream>

#include "toruskit/cli.hpp"

int main(int argc, char** argv) {
  return toruskit::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
