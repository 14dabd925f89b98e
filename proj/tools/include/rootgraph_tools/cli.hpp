#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rootgraph::cli {

/// Exit codes of the `rootgraph` tool.
enum ExitCode : int {
  kOk = 0,
  kProgramFailed = 1,  // the program ended in Failure (or diverged)
  kUsage = 2,          // bad flags, unreadable or unparsable input
  kMismatch = 3,       // validation error, report violations, or differential mismatch
};

/// Runs the tool with `args` (without the program name). Output goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootgraph::cli
