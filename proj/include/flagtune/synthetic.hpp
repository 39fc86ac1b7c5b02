#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flagtune/evaluator.hpp"
#include "flagtune/flagspace.hpp"
#include "flagtune/measurement.hpp"

namespace flagtune {

/// Additive seconds contributed by one flag in each of its states.
struct FlagEffect {
  double on = 0.0;
  double off = 0.0;

  friend bool operator==(const FlagEffect&, const FlagEffect&) = default;
};

/// Applies `delta` when both flags are in the given joint state.
struct PairTerm {
  std::string first;
  std::string second;
  FlagState first_state = FlagState::disabled;
  FlagState second_state = FlagState::disabled;
  double delta = 0.0;

  friend bool operator==(const PairTerm&, const PairTerm&) = default;
};

struct BenchmarkModel {
  double base_time = 1.0;
  std::map<std::string, double> level_multiplier;  // missing levels multiply by 1
  std::map<std::string, FlagEffect> flag_delta;
  std::vector<PairTerm> pair_delta;

  friend bool operator==(const BenchmarkModel&, const BenchmarkModel&) = default;
};

/// Deterministic cost model standing in for hardware:
///   time = base_time * level_multiplier[level] + sum of flag terms + sum of matching pair terms
///
/// Construction binds flag names to a flag space and proves, by bounding every term from
/// below, that no configuration can produce a non-positive time.
class SyntheticModel {
 public:
  SyntheticModel(const FlagSpace& space, std::map<std::string, BenchmarkModel> benchmarks);

  bool models(std::string_view benchmark) const;
  std::vector<std::string> benchmark_names() const;
  const BenchmarkModel& spec(std::string_view benchmark) const;
  const std::map<std::string, BenchmarkModel>& specs() const noexcept { return specs_; }

  /// Throws Error for an unmodeled benchmark, StructuralError for a foreign configuration.
  double time(const Configuration& config, std::string_view benchmark) const;
  /// Lower bound on time() over all configurations.
  double lower_bound(std::string_view benchmark) const;

 private:
  struct Pair {
    std::size_t first, second;
    FlagState first_state, second_state;
    double delta;
  };
  struct Bound {
    double base_time;
    std::vector<double> level_multiplier;  // by level index
    std::vector<FlagEffect> effects;       // by flag index
    std::vector<Pair> pairs;
    double lower_bound;
  };
  const Bound& bound(std::string_view benchmark) const;

  FlagSpace space_;
  std::map<std::string, BenchmarkModel> specs_;
  std::map<std::string, Bound, std::less<>> bound_;
};

/// time from the model, status ok, digest = digest of the configuration key.
Measurement evaluate_synthetic(const Configuration& config, std::string_view benchmark,
                               const SyntheticModel& model,
                               std::string_view digest_algorithm = kDefaultDigest);

SyntheticModel parse_synthetic_model(std::string_view document, const FlagSpace& space);
SyntheticModel load_synthetic_model(const std::filesystem::path& path, const FlagSpace& space);
std::string serialize_synthetic_model(const SyntheticModel& model);

class SyntheticBackend : public Backend {
 public:
  explicit SyntheticBackend(const SyntheticModel& model,
                            std::string digest_algorithm = std::string(kDefaultDigest))
      : model_(model), algorithm_(std::move(digest_algorithm)) {}

  CompileOutcome compile(const Configuration& config, const Benchmark& bench) override;
  RunOutcome run(const Benchmark& bench, const CompileOutcome& binary) override;

 private:
  const SyntheticModel& model_;
  std::string algorithm_;
  std::mutex mutex_;
  std::map<std::string, double> pending_;  // digest -> modeled time
};

}  // namespace flagtune
