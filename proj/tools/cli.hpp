#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tritile {

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`. Returns the exit code:
/// 0 on success, 1 on a failed verification or runtime error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tritile
