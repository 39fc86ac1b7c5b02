#pragma once

#include <chrono>
#include <filesystem>
#include <string>

namespace flagtune {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or on timeout
  bool timed_out = false;
  std::string out;
  std::string err;
  double wall_seconds = 0.0;

  bool ok() const noexcept { return !timed_out && exit_code == 0; }
};

/// Runs `command` through /bin/sh in its own process group. On timeout the whole
/// group is killed with SIGKILL.
ProcessResult run_shell(const std::string& command, std::chrono::duration<double> timeout,
                        const std::filesystem::path& working_dir = {});

/// Single-quotes `arg` for /bin/sh when it contains anything but safe characters.
std::string shell_quote(const std::string& arg);

}  // namespace flagtune
