#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flagtune/benchmark.hpp"
#include "flagtune/evaluator.hpp"
#include "flagtune/flagspace.hpp"
#include "flagtune/trace.hpp"

namespace flagtune {

/// Relative improvement percentage of a toggled configuration over its baseline.
/// Negative means the toggle made things faster. Throws std::invalid_argument unless
/// t_base > 0 and both times are finite.
double rip(double t_toggled, double t_base);
/// +infinity when either measurement is not ok.
double rip(const Measurement& toggled, const Measurement& base);

/// Snapshot of a combined-elimination search after its candidate list was formed.
struct CEState {
  std::string campaign;
  std::size_t round = 0;
  std::vector<std::size_t> search_space;  // flag indices still searchable, ascending
  Configuration baseline;
  double objective = 0.0;  // T_B, or the suite aggregate for suite-wide CE
  std::vector<std::pair<std::size_t, double>> candidates;  // flags with negative RIP, ascending by RIP

  friend bool operator==(const CEState&, const CEState&) = default;
};

struct SearchHooks {
  std::function<void(const CEState&)> on_state;
};

/// Draw `draw_index` of a random-iterative-compilation campaign: uniform base level,
/// each flag enabled with probability 1/2.
Configuration sample_ric(const FlagSpace& space, std::uint64_t seed, std::uint64_t draw_index);

/// Evaluates the stock baseline (record 1, "reference") and then `n_configs` samples on
/// every benchmark of the suite. Failed evaluations are recorded, not fatal.
CampaignTrace run_ric(const FlagSpace& space, const Suite& suite, Evaluator& evaluator,
                      std::size_t n_configs, std::uint64_t seed);

struct CEResult {
  Configuration config;
  double time = 0.0;
  CampaignTrace trace;
  std::vector<double> accepted_times;  // T_B at the start and after each accepted toggle
};

/// Combined elimination for one program, starting from every flag enabled at the
/// space's default level. Throws CampaignError when that starting point does not evaluate.
CEResult run_ce(const FlagSpace& space, const Benchmark& bench, Evaluator& evaluator,
                const SearchHooks& hooks = {});

enum class Aggregate { arithmetic_mean, geometric_mean };

std::string_view to_string(Aggregate a) noexcept;
/// "mean" / "geomean"; throws ParseError.
Aggregate parse_aggregate(std::string_view text);
double aggregate(Aggregate a, std::span<const double> ratios);

struct SuiteCEParams {
  double threshold_percent = 0.0;
  std::optional<Configuration> baseline;  // stock_baseline(space) when absent
  Aggregate aggregate = Aggregate::arithmetic_mean;
};

struct SuiteCEResult {
  Configuration config;
  CampaignTrace trace;
  std::map<std::string, double> reference;    // T_ref per benchmark
  std::map<std::string, double> final_times;  // times of the returned configuration
  std::vector<double> accepted_objectives;    // aggregate at the start and after each accepted toggle
};

/// Suite-wide combined elimination: one configuration for the whole suite, no benchmark
/// slower than (1 + t/100) times its baseline time.
SuiteCEResult run_suite_ce(const FlagSpace& space, const Suite& suite, Evaluator& evaluator,
                           const SuiteCEParams& params, const SearchHooks& hooks = {});

struct BestKnown {
  Measurement measurement;
  Configuration config;
  std::size_t sequence = 0;
  std::size_t trace_index = 0;
  std::string method;
};

/// Fastest ok measurement of `benchmark` across traces; ties go to the lowest sequence
/// number, then to the earlier trace. Throws Error when there is none.
BestKnown best_known(std::span<const CampaignTrace> traces, std::string_view benchmark);

}  // namespace flagtune
