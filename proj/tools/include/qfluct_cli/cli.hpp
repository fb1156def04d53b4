#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfluct::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNumericalFailure = 2,
  kIoFailure = 3,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "QFLUCT_OUTPUT_DIR";

/// Runs the command line `args` (args[0] is the program name). Data and
/// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfluct::cli
