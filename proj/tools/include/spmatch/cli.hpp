#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spmatch {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNoResult = 2,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics and progress to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spmatch
