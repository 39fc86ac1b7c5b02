#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flagtune/evaluator.hpp"
#include "flagtune/search.hpp"

namespace flagtune {

/// Append-only campaign log (JSON lines):
///   {"kind":"header", "command":..., "fingerprint":...}
///   {"kind":"eval", "benchmark":..., "base_level":..., "bitstring":..., "status":..., ...}
///   {"kind":"state", ...CEState...}
/// Searches are deterministic functions of their measurements, so a campaign resumes by
/// replaying the logged measurements in order and continuing live after the last one.
struct CheckpointLog {
  struct Eval {
    std::string benchmark;
    Configuration config;
    Measurement measurement;
  };
  nlohmann::ordered_json header;
  std::vector<Eval> evals;
  std::vector<nlohmann::ordered_json> states;
};

/// A torn trailing line is ignored. Throws ParseError on anything else malformed.
CheckpointLog load_checkpoint(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const CEState& state);

/// Wraps an evaluator: serves replayed measurements first, logs every measurement, and
/// raises Interrupted before a fresh evaluation once a stop is requested.
class CheckpointingEvaluator : public Evaluator {
 public:
  struct Options {
    const std::atomic<bool>* stop = nullptr;
    std::optional<std::size_t> stop_after;  // fresh evaluations allowed before stopping
  };

  /// Throws Error when `resume` was written for a different header.
  CheckpointingEvaluator(Evaluator& inner, const std::filesystem::path& path, nlohmann::ordered_json header,
                         std::optional<CheckpointLog> resume, Options options);

  Measurement evaluate(const Configuration& config, const Benchmark& bench) override;
  std::vector<Measurement> evaluate_batch(std::span<const Configuration> configs, const Benchmark& bench) override;
  void prime(const Configuration& config, const Benchmark& bench, const Measurement& m) override;
  EvalStats stats() const override;

  /// Logs a search state; while resuming, also checks it against the original run.
  void record_state(const CEState& state);

  std::size_t replayed() const noexcept { return replay_pos_; }

 private:
  std::optional<Measurement> next_replay(const Configuration& config, const Benchmark& bench);
  void check_stop(std::size_t wanted);
  void log_eval(const Configuration& config, const Benchmark& bench, const Measurement& m);
  void write_line(const nlohmann::ordered_json& j);

  Evaluator& inner_;
  std::ofstream out_;
  std::optional<CheckpointLog> resume_;
  Options options_;
  std::size_t replay_pos_ = 0;
  std::size_t state_pos_ = 0;
  std::size_t fresh_ = 0;
  EvalStats replay_stats_;
};

}  // namespace flagtune
