#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flagtune/benchmark.hpp"
#include "flagtune/evaluator.hpp"
#include "flagtune/flagspace.hpp"
#include "flagtune/search.hpp"
#include "flagtune/trace.hpp"

namespace flagtune {

/// Reference time (T_ref) per benchmark.
using ReferenceTimes = std::map<std::string, double>;

/// Reference times taken from the first record annotated "reference" that measured each
/// benchmark ok.
ReferenceTimes reference_from_traces(std::span<const CampaignTrace> traces);
ReferenceTimes load_reference(const std::filesystem::path& path);

struct RelativeSeries {
  std::vector<std::pair<std::size_t, double>> points;  // (configurations tested, value)
  std::string description;
};

/// After each prefix of c configurations: the mean over benchmarks of
/// min(1, best time so far / T_ref). Benchmarks without an ok measurement yet count as 1.
/// With several traces (one campaign per benchmark), prefix c covers the first c records
/// of each trace.
RelativeSeries floored_best_so_far(std::span<const CampaignTrace> traces, const ReferenceTimes& reference);
RelativeSeries floored_best_so_far(const CampaignTrace& trace, const ReferenceTimes& reference);

struct ComparisonRow {
  std::string benchmark;
  std::optional<double> best_ratio;  // unfloored; absent when nothing ran ok
  std::optional<Configuration> best_config;
  std::string method;
  std::size_t sequence = 0;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // one per reference benchmark, name order
  double mean_ratio = 1.0;          // arithmetic mean over rows with a ratio
};

ComparisonTable compare_to_baseline(std::span<const CampaignTrace> traces, const ReferenceTimes& reference);

/// Assignment of programs to k test folds.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::string> programs;  // input order
  std::map<std::string, std::size_t> assignment;

  std::vector<std::string> test_set(std::size_t fold) const;
  std::vector<std::string> training_set(std::size_t fold) const;
};

/// Uniform random partition into k folds whose sizes differ by at most one.
/// Throws std::invalid_argument unless 2 <= k <= |programs| and names are unique.
FoldPlan make_folds(std::span<const std::string> programs, std::size_t k, std::uint64_t seed);

struct TestResult {
  std::string program;
  double reference = 0.0;
  std::optional<double> time;  // absent when the trained configuration failed
  std::optional<double> ratio;
};

struct FoldResult {
  std::size_t fold = 0;
  std::optional<Configuration> trained;
  CampaignTrace trace;
  std::vector<TestResult> tests;
  std::string error;  // campaign error message, empty on success
};

struct XvalResult {
  std::vector<FoldResult> folds;
  double mean_ratio = 1.0;  // over every program with a ratio
};

/// Per fold: suite-wide CE on the training programs only, then the trained configuration
/// is measured on the held-out programs against their baseline times.
XvalResult run_xval(const FlagSpace& space, const Suite& suite, Evaluator& evaluator,
                    const SuiteCEParams& params, const FoldPlan& plan, const SearchHooks& hooks = {});

struct FeatureVector {
  std::string program;
  std::vector<double> features;
};

/// Delimited table: header row, then one row per program (name followed by the features).
/// Commas or tabs separate columns.
std::vector<FeatureVector> parse_feature_table(std::string_view document);
std::vector<FeatureVector> load_feature_table(const std::filesystem::path& path);

struct PerformanceEntry {
  Configuration config;
  double time = 0.0;
};
using PerformanceTable = std::vector<PerformanceEntry>;

/// Every ok measurement of `benchmark`, in trace order.
PerformanceTable performance_table(std::span<const CampaignTrace> traces, std::string_view benchmark);

struct TrainingProgram {
  FeatureVector features;
  PerformanceTable table;
};

struct Prediction {
  Configuration config;
  std::string neighbor;
  double distance = 0.0;
};

/// Copies the best configuration of the Euclidean-nearest training program. With
/// `normalize`, each feature is z-scored with training-set statistics first.
/// Ties go to the earlier training program and, within a table, the earlier entry.
Prediction predict_1nn(const FeatureVector& query, std::span<const TrainingProgram> training, bool normalize = true);

}  // namespace flagtune
