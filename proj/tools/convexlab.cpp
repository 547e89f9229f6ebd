#include <iostream>
#include <string>
#include <vector>

#include "convexlab/cli.hpp"

int main(int argc, char** argv) {
  return convexlab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
