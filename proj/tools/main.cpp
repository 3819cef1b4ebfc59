#include "funk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return funk::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
