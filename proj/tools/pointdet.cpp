#include <string>
#include <vector>

#include "pointdet/cli.hpp"

int main(int argc, char** argv) {
  return pointdet::cli::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
