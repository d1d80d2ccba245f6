#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rank2lu::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotEquivalent = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUndecided = 3;

/// Runs one command line (argv[0] is the program name). Exactly one JSON
/// document goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rank2lu::cli
