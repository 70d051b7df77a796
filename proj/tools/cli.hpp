#pragma once

#include <iosfwd>

namespace viscodual::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kUsage = 2, kNumeric = 3 };

/// Runs one command line.  Results go to files or `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace viscodual::cli
