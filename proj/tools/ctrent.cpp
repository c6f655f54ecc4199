#include <iostream>

#include "ctrent/cli/commands.hpp"

int main(int argc, char** argv) {
  return ctrent::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
