#pragma once

#include <string>
#include <vector>

namespace webmap::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kNumericalFailure = 3 };

/// Runs the command line `webmap <args...>` (args excludes the program name).
/// Diagnostics go to stderr; reports without --out go to stdout.
int run(const std::vector<std::string>& args);

/// Reads a key=value config file into "--key value" tokens, skipping keys
/// already present in args so that the command line wins.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& path);

}  // namespace webmap::cli
