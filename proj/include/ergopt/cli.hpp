#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ergopt::cli {

/// Exit codes: 0 success, 1 validation or usage error, 2 computation error.
int run(int argc, const char* const* argv);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergopt::cli
