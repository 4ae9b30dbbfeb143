#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bam::cli {

// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kModelError = 1,
  kDataError = 2,
  kMismatch = 3,
  kIoError = 4,
  kUsageError = 64,
};

// Runs one command line (without the program name). Results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bam::cli
