#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zenosplit::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kRuntime = 4 };

/// Runs one command line (args exclude the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zenosplit::cli
