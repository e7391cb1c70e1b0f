#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chainprime::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kGuardStop = 3, kInvariant = 4 };

/// Runs one command line (without the program name). Data goes to `out`
/// unless --out names a file; diagnostics and progress go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainprime::cli
