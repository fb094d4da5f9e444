#pragma once

#include <iosfwd>

namespace qdyn {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2 };

/**
 * Entry point of the `qdyn` tool. Subcommands: verify, scan, divisibility,
 * sweep, bounds. Reports are written under --out; progress and verdicts go
 * to `out`, diagnostics to `err`.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdyn
