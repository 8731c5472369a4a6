#include <cstdlib>
#include <iostream>

#include <unistd.h>

#include "icorr/cli.hpp"

int main(int argc, char** argv) {
  const bool color = ::isatty(STDERR_FILENO) && std::getenv("NO_COLOR") == nullptr;
  return icorr::cli::main(argc, argv, std::cout, std::cerr, color);
}
