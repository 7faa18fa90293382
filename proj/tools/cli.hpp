#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ringbif::cli {

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name). Artifacts go to
/// --output-dir; progress and errors go to `out` / `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ringbif::cli
