#pragma once

#include <iosfwd>

namespace chipcost::cli {

// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad command line
  kIo = 2,          // unreadable input, unwritable output
  kParse = 3,       // malformed dataset or spec file
  kValidation = 4,  // invalid record or unknown name
  kModel = 5,       // model could not produce a result
  kLimit = 6,       // sweep cap exceeded
};

/// Runs one command. Data goes to `out` (unless --output is given),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chipcost::cli
