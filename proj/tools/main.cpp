#include "cli.hpp"

int main(int argc, char** argv) {
  return tvkit::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
