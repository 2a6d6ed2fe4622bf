#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oprime::cli {

/// Runs one command line (args excludes the program name). JSON or a table
/// goes to `out`, diagnostics to `err`. Returns 0 on success, 1 when a
/// requested assertion failed, 2 on an input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oprime::cli
