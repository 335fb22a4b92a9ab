#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treid {

inline constexpr const char* kToolVersion = "0.1.0";

// Runs the command line given as plain arguments (no argv[0]); returns the
// process exit code: 0 success, 1 domain/validation error, 2 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace treid
