#include <string>
#include <vector>

#include "vd/cli.hpp"

int main(int argc, char** argv) {
  return vd::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
