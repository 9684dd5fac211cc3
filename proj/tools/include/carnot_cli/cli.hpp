#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carnot::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kHypothesesFail = 3,
  kInvariantBreach = 4,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`; human-mode errors go to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carnot::cli
