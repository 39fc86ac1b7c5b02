#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include "flagtune/benchmark.hpp"
#include "flagtune/evaluator.hpp"
#include "flagtune/flagspace.hpp"

namespace flagtune {

/// Compiles and runs through the suite's shell command templates.
///
/// `{flags}` expands to the rendered, shell-quoted argument list, `{out}` and `{bin}` to
/// the binary path inside `work_dir`. With TimingMode::reported the last non-empty line of
/// the run command's stdout must parse as seconds; otherwise the process is wall-clocked.
class ExternalBackend : public Backend {
 public:
  ExternalBackend(const FlagSpace& space, std::filesystem::path work_dir, TimingMode timing,
                  std::string digest_algorithm = std::string(kDefaultDigest));

  CompileOutcome compile(const Configuration& config, const Benchmark& bench) override;
  RunOutcome run(const Benchmark& bench, const CompileOutcome& binary) override;
  void discard(const CompileOutcome& binary) override;

 private:
  const FlagSpace& space_;
  std::filesystem::path work_dir_;
  TimingMode timing_;
  std::string algorithm_;
  std::atomic<std::uint64_t> counter_{0};
};

/// Replaces every `{name}` in `templ` by `value`.
std::string substitute(std::string templ, std::string_view name, std::string_view value);

}  // namespace flagtune
