#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pamr::cli {

enum ExitCode : int {
  kOk = 0,
  kFindings = 1,  // validator errors (or warnings under --strict)
  kUsage = 2,     // bad arguments, unparsable input, unmatched ids
  kIo = 3,
};

/// Runs the `pamr` command line. `args` excludes the program name. A file
/// argument of `-` reads from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pamr::cli
