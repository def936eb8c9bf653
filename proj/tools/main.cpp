#include <string>
#include <vector>

#include "sqa/cli.hpp"

int main(int argc, char** argv) {
  return sqa::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
