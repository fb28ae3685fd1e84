#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subcocycle::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericError = 2, kPartial = 3 };

// Runs one command line (args excludes the program name). The report goes to
// `out` unless --out names a file; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subcocycle::cli
