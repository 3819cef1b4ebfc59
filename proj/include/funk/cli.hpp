#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace funk::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // bad flags or config files
inline constexpr int kExitNumerical = 3;  // domain, interior or regularity errors
inline constexpr int kExitFailed = 4;     // non-convergence, failed field points

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace funk::cli
