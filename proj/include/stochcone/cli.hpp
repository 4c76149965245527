#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stochcone {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,           // success, or the tested property holds
  kExitFails = 1,        // the tested property fails
  kExitInput = 2,        // usage or input error
  kExitDisagreement = 3, // internal cross-check disagreement
};

/// Runs the command line `args` (args[0] is the program name). Output goes
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stochcone
