#pragma once

#include <iosfwd>

namespace descort {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,
  kExitSchema = 2,
  kExitTransformFailed = 3,
  kExitDivergent = 4,
};

/// Entry point of the `descort` tool: transform, measure, sweep and
/// reproduce-example subcommands. Output files go through --out; without it
/// results are written to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace descort
