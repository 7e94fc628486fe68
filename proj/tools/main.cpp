#include <iostream>

#include "linamalg/cli.hpp"

int main(int argc, char** argv) {
  return linamalg::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
