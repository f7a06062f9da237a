#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ranpower {

// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitPartial = 2,
  kExitInfeasible = 3,
};

// Runs one CLI invocation. `args` excludes the program name. Data goes to
// `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ranpower
