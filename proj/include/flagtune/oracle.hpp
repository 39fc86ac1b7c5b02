#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flagtune/flagspace.hpp"
#include "flagtune/search.hpp"
#include "flagtune/synthetic.hpp"

namespace flagtune {

struct OracleEntry {
  Configuration config;
  double time = 0.0;
};

struct BenchmarkOptimum {
  std::string benchmark;
  std::vector<OracleEntry> per_level;  // fastest assignment at each base level, level order
  OracleEntry best;                    // fastest overall; earlier level wins ties
};

inline constexpr std::size_t kDefaultOracleCap = 16;

/// Exhaustive search over every base level and all 2^n assignments of a synthetic model.
/// Assignments are enumerated as binary counters with flag 0 as the most significant bit,
/// all-disabled first; the first minimum found wins. Throws std::invalid_argument when
/// n exceeds `max_flags`.
BenchmarkOptimum brute_force_optimum(const FlagSpace& space, const SyntheticModel& model,
                                     std::string_view benchmark, std::size_t max_flags = kDefaultOracleCap);

struct SuiteOptimum {
  Configuration config;
  double objective = 0.0;
  std::vector<double> times;  // per benchmark, in the given order
};

/// Best aggregate over all configurations that keep every benchmark within
/// (1 + t/100) of its time under `reference_config`. The reference itself is always
/// feasible, so a result exists.
SuiteOptimum suite_constrained_optimum(const FlagSpace& space, const SyntheticModel& model,
                                       std::span<const std::string> benchmarks,
                                       const Configuration& reference_config, double threshold_percent,
                                       Aggregate aggregate = Aggregate::arithmetic_mean,
                                       std::size_t max_flags = kDefaultOracleCap);

}  // namespace flagtune
