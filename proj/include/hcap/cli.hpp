#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcap::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kInputError = 2 };

/// Runs the command line `args` (without the program name) and returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcap::cli
