#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace toruskit {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitMalformed = 2,
  kExitNegative = 10,
  kExitInconclusive = 20,
};

/// Runs one toruskit command. `args` excludes the program name. JSON goes to
/// `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toruskit
