#pragma once

#include <string>
#include <vector>

namespace pm25 {

/// Runs one CLI invocation (argv without the program name) and returns the
/// process exit code: 0 success, 1 usage/validation error, 2 empty study.
int run_command(const std::vector<std::string>& argv);

} // namespace pm25
