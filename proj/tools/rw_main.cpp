#include <iostream>

#include "rw/cli.hpp"

int main(int argc, char** argv) {
  return rw::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
