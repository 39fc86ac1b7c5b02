#include "flagtune/oracle.hpp"

#include <stdexcept>

namespace flagtune {

namespace {

template <class Visit>
void for_each_configuration(const FlagSpace& space, std::size_t max_flags, Visit visit) {
  const auto n = space.size();
  if (n > max_flags)
    throw std::invalid_argument("oracle refuses " + std::to_string(n) + " flags (cap " + std::to_string(max_flags) + ")");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<FlagState> assignment(n);
  for (const auto& level : space.base_levels()) {
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (std::size_t i = 0; i < n; ++i)
        assignment[i] = (mask >> (n - 1 - i)) & 1 ? FlagState::enabled : FlagState::disabled;
      visit(Configuration(level.name, assignment));
    }
  }
}

}  // namespace

BenchmarkOptimum brute_force_optimum(const FlagSpace& space, const SyntheticModel& model,
                                     std::string_view benchmark, std::size_t max_flags) {
  BenchmarkOptimum out;
  out.benchmark = std::string(benchmark);
  for_each_configuration(space, max_flags, [&](Configuration c) {
    double t = model.time(c, benchmark);
    if (out.per_level.empty() || out.per_level.back().config.base_level() != c.base_level())
      out.per_level.push_back({c, t});
    else if (t < out.per_level.back().time)
      out.per_level.back() = {c, t};
  });
  out.best = out.per_level.front();
  for (const auto& e : out.per_level)
    if (e.time < out.best.time) out.best = e;
  return out;
}

SuiteOptimum suite_constrained_optimum(const FlagSpace& space, const SyntheticModel& model,
                                       std::span<const std::string> benchmarks,
                                       const Configuration& reference_config, double threshold_percent,
                                       Aggregate aggregate_kind, std::size_t max_flags) {
  if (benchmarks.empty()) throw std::invalid_argument("suite optimum needs benchmarks");
  std::vector<double> reference, limit;
  for (const auto& b : benchmarks) {
    reference.push_back(model.time(reference_config, b));
    limit.push_back((1.0 + threshold_percent / 100.0) * reference.back());
  }
  std::optional<SuiteOptimum> best;
  std::vector<double> times(benchmarks.size()), ratios(benchmarks.size());
  for_each_configuration(space, max_flags, [&](Configuration c) {
    for (std::size_t i = 0; i < benchmarks.size(); ++i) {
      times[i] = model.time(c, benchmarks[i]);
      if (times[i] > limit[i]) return;
      ratios[i] = times[i] / reference[i];
    }
    double obj = aggregate(aggregate_kind, ratios);
    if (!best || obj < best->objective) best = SuiteOptimum{std::move(c), obj, times};
  });
  return *best;
}

}  // namespace flagtune
