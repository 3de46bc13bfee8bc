#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rdsde::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_invariant = 2;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdsde::cli
