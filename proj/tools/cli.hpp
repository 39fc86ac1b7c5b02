#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace flagtune::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kCampaignFailure = 2,
  kInterrupted = 3,
};

/// Set by SIGINT/SIGTERM; campaigns stop before their next fresh evaluation.
std::atomic<bool>& stop_flag();

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flagtune::cli
