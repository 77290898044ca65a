#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace aoi::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kDomainError = 2,
  kNotConverged = 3,  // also degenerate simulations
  kUsage = 64,
};

/// Parses `args` (without the program name), runs the subcommand and writes
/// its report to `out`. Diagnostics go to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aoi::cli
