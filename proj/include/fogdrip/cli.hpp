#pragma once

#include <iosfwd>

namespace fogdrip {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      ///< a check failed or an unexpected error occurred
  kExitConfig = 2,       ///< usage or configuration error
  kExitIncomplete = 3,   ///< budget exhausted or a run did not converge
};

/// Entry point of the `fogdrip` tool: subcommands simulate, phase-diagram,
/// wulff, oracle-check and sweep.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fogdrip
