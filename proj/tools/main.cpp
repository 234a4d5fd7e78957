#include <vector>

#include "advaug/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return advaug::run_cli(args);
}
