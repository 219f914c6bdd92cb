#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace engage {

/// Runs the command line with args (program name excluded). Returns the
/// process exit code: 0 success, 1 input error, 2 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace engage
