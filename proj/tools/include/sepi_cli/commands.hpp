#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepi::cli {

/// Runs one invocation. `args` excludes the program name.
/// Exit codes: 0 ok, 1 validation/input error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sepi::cli
