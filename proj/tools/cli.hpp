#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mcir::cli {

/// Runs the command line `args` (args[0] is the program name).
/// Returns 0 on success, 1 on a runtime failure and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcir::cli
