#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptchain::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;   // bad flags, validation or domain errors
inline constexpr int kExitNumerical = 2; // solver did not converge / certify

/// Runs one invocation; args excludes the program name. Records go to
/// `out` unless --out is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ptchain::cli
