#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tempodag::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kCyclic = 3,
  kNothingToDo = 4,
  kViolations = 5,
};

struct Environment {
  /// Value of TEMPODAG_COLOR, if set.
  std::optional<std::string> color;
  /// Whether `out` is an interactive terminal.
  bool out_is_tty = false;
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env = {});

}  // namespace tempodag::cli
