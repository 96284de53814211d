#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gzsl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
};

/// Parses `args` (without the program name) as one of the subcommands synth,
/// train, eval, sweep or retrieve and runs it. Help goes to `out`, diagnostics
/// to `err`.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gzsl::cli
