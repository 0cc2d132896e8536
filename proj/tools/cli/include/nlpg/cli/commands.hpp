#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlpg::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSolverFailure = 2 };

/// Entry point of the `nlpg` executable. `args` excludes the program name.
/// Reports go to stdout or the --output target; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& err);

}  // namespace nlpg::cli
