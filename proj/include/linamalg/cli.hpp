#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace linamalg::cli {

/// Exit codes of the command line.
enum ExitCode : int {
  ok = 0,            // success, or a witness was found
  refuted = 1,       // the check failed or no witness exists
  bad_input = 2,     // parse error, unmet precondition or usage error
  over_budget = 3,   // a search exceeded its budget
  internal = 4,      // a construction broke one of its own invariants
};

/// Runs one command. `args` excludes the program name. File arguments of
/// the form `fixture:<name>/<file>` read bundled fixture files.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linamalg::cli
