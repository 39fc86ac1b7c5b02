#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flagtune {

/// How a timed execution is measured.
enum class TimingMode {
  reported,  // the run command prints the time in seconds on its last output line
  external,  // the harness wall-clocks the run command
};

struct Benchmark {
  std::string name;
  std::string compile_command;  // placeholders {flags} and {out}
  std::string run_command;      // placeholder {bin}
  std::chrono::duration<double> timeout{60.0};
  int repeat_runs = 1;
  std::filesystem::path working_dir;  // commands run here; empty means inherit
};

struct Suite {
  TimingMode timing = TimingMode::reported;
  std::vector<Benchmark> benchmarks;

  const Benchmark* find(std::string_view name) const;
  std::vector<std::string> names() const;
  /// Benchmarks whose names are in `keep`, in suite order.
  Suite subset(std::span<const std::string> keep) const;
};

/// Validates name uniqueness, timeout > 0 and repeat_runs >= 1.
/// With `require_commands`, every benchmark must also carry compile and run commands.
Suite parse_suite(std::string_view document, bool require_commands);
/// Relative working directories resolve against the file's directory.
Suite load_suite(const std::filesystem::path& path, bool require_commands);

}  // namespace flagtune
