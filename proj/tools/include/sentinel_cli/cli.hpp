#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sentinel::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kDetectorError = 4,
  kBudgetExceeded = 5,
};

/// Runs one command line. `args` excludes the program name. Results go to
/// `out`; progress, logs and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sentinel::cli
