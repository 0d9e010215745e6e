#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kirchhoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIdentityViolated = 1;
inline constexpr int kExitInputError = 2;

/// Entry point of the `kirchhoff` tool. `args` excludes the program name.
/// Commands: validate | forests | matrix-tree | project | solve | lowtemp |
/// gauge-check. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kirchhoff::cli
