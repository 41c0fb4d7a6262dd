#include <iostream>

#include "sepi_cli/commands.hpp"

int main(int argc, char** argv) {
  return sepi::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
