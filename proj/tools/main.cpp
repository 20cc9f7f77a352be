#include <iostream>

#include "emg/cli.hpp"

int main(int argc, char** argv) {
  return emg::cli::run(argc, argv, std::cout, std::cerr);
}
