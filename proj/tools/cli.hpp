#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdftest::cli {

enum ExitCode : int {
  kCompleted = 0,
  kUsageError = 2,
  kNumericFailure = 3,
};

/// Replaces `--config FILE` (or `--config=FILE`) by the flags stored in FILE,
/// inserted right after the subcommand so that explicit flags override them.
/// FILE is either a run manifest or a flat JSON object of flag values. When
/// no subcommand is given, the manifest's `command` is used.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Runs one invocation (arguments without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdftest::cli
