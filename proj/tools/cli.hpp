#pragma once

// Command-line surface. Exposed as a function so tests can drive subcommands
// in-process; main() is a thin wrapper.
//
// Exit codes: 0 success, 1 validation/usage error, 2 numeric failure.

#include <string>
#include <vector>

namespace odds::cli {

int dispatch(const std::vector<std::string>& args);

}  // namespace odds::cli
