#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace balis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

/// Runs one CLI invocation. `args` excludes the program name. Records go to `out`
/// (or to --out), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace balis::cli
