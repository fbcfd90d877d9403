#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdtest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Parses `args` (without the program name), runs the requested test and
/// writes the report to `out`; diagnostics go to `err`. Returns the exit code:
/// 0 whenever the test completes, 2 for bad flags, 1 for any other error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdtest::cli
