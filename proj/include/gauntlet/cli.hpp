#pragma once
// Command-line driver. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <ostream>
#include <string>
#include <vector>

namespace gauntlet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gauntlet
