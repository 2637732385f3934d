#include <iostream>
#include <string>
#include <vector>

#include "heismag/cli.hpp"

int main(int argc, char** argv) {
  return heismag::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
