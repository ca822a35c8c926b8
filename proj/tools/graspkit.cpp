#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "graspkit/cli.hpp"

int main(int argc, char** argv) {
  try {
    return graspkit::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
