#pragma once

#include <string>
#include <vector>

namespace scx {

/// Dispatches one CLI invocation (argv without the program name).
/// Returns the process exit status: 0 success, 1 usage error, 2 numeric or
/// configuration failure (the error name goes to stderr).
int run_command(const std::vector<std::string>& args);

}  // namespace scx
