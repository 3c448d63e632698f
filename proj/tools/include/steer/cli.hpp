#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace steer {

/// Entry point of steerctl. `args` excludes the program name. Output is
/// line-oriented; failures print "error <code>: <message>" to `err`.
///
/// Exit codes: 0 success, 1 verify found mismatches, 2 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steer
