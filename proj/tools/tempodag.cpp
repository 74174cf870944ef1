#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "tempodag/cli.hpp"

int main(int argc, char** argv) {
  tempodag::cli::Environment env;
  if (const char* color = std::getenv("TEMPODAG_COLOR")) env.color = color;
  env.out_is_tty = ::isatty(STDOUT_FILENO) != 0;
  std::vector<std::string> args(argv + 1, argv + argc);
  return tempodag::cli::run(args, std::cout, std::cerr, env);
}
