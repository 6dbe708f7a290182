#include <string>
#include <vector>

#include "basel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return basel::run_command(args);
}
