#include <iostream>

#include "wordgroup/cli.hpp"

int main(int argc, char** argv) {
  return wordgroup::cli::run(argc, argv, std::cout, std::cerr);
}
