#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrchialvo::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidArgument = 2,
  kNumericalFailure = 3,
  kEscapeDominated = 4,
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs the tool. args excludes the program name. Data files and the
/// manifest go to --out (default: current directory); messages go to out/err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrchialvo::cli
