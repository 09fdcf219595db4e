#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace odmr::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

// Entry point shared by the executable and the tests. args[0] is the program
// name. Diagnostics go to `err`; report output without --out goes to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace odmr::cli
