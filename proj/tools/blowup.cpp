#include <iostream>

#include "blowup/cli/commands.hpp"

int main(int argc, char** argv) {
  return blowup::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
