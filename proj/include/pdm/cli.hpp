#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdm::cli {

/// Exit codes.
inline constexpr int kSuccess = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsageError = 2;

/// Subcommands: simulate, exact, map, noninvariance, verify, misprints.
/// args excludes the program name. Diagnostics go to err; tables and
/// reports go to out unless a path is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace pdm::cli
