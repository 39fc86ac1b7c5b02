#include "flagtune/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"
#include "flagtune/rng.hpp"

namespace flagtune {

double rip(double t_toggled, double t_base) {
  if (!(t_base > 0) || !std::isfinite(t_base) || !std::isfinite(t_toggled))
    throw std::invalid_argument("rip needs finite times and a positive baseline");
  return (t_toggled - t_base) / t_base * 100.0;
}

double rip(const Measurement& toggled, const Measurement& base) {
  if (!toggled.ok() || !base.ok()) return std::numeric_limits<double>::infinity();
  return rip(*toggled.time, *base.time);
}

Configuration sample_ric(const FlagSpace& space, std::uint64_t seed, std::uint64_t draw_index) {
  auto rng = seeded_engine(seed, draw_index);
  const auto& levels = space.base_levels();
  auto level = levels[uniform_below(rng, levels.size())].name;
  std::vector<FlagState> assignment;
  assignment.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    assignment.push_back((rng() >> 63) != 0 ? FlagState::enabled : FlagState::disabled);
  return Configuration(std::move(level), std::move(assignment));
}

CampaignTrace run_ric(const FlagSpace& space, const Suite& suite, Evaluator& evaluator,
                      std::size_t n_configs, std::uint64_t seed) {
  if (n_configs < 1) throw std::invalid_argument("run_ric needs n_configs >= 1");
  CampaignTrace trace;
  trace.method = "ric";
  trace.campaign = suite.benchmarks.size() == 1 ? suite.benchmarks.front().name : "suite";

  auto evaluate_all = [&](TraceRecord& record) {
    for (const auto& bench : suite.benchmarks)
      record.measurements.emplace_back(bench.name, evaluator.evaluate(record.config, bench));
  };
  evaluate_all(trace.append(stock_baseline(space), "reference"));
  for (std::size_t i = 0; i < n_configs; ++i)
    evaluate_all(trace.append(sample_ric(space, seed, i), "sample " + std::to_string(i + 1)));
  return trace;
}

namespace {

std::string toggle_label(const FlagSpace& space, const Configuration& after, std::size_t flag) {
  const auto& f = space.flag(flag);
  return after.enabled(flag) ? f.on : f.off;
}

/// Negative-RIP candidates ascending; the stable sort keeps lower flag indices first on ties.
std::vector<std::pair<std::size_t, double>> negative_sorted(std::vector<std::pair<std::size_t, double>> rips) {
  std::erase_if(rips, [](const auto& p) { return !(p.second < 0); });
  std::stable_sort(rips.begin(), rips.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return rips;
}

}  // namespace

CEResult run_ce(const FlagSpace& space, const Benchmark& bench, Evaluator& evaluator, const SearchHooks& hooks) {
  CEResult result;
  result.trace.method = "ce";
  result.trace.campaign = bench.name;
  auto& trace = result.trace;

  Configuration baseline = all_enabled(space);
  {
    auto& rec = trace.append(baseline, "baseline");
    auto m = evaluator.evaluate(baseline, bench);
    rec.measurements.emplace_back(bench.name, m);
    if (!m.ok())
      throw CampaignError("benchmark '" + bench.name + "' fails with every flag enabled (" +
                          std::string(to_string(m.status)) + ")");
    result.time = *m.time;
  }
  result.accepted_times.push_back(result.time);

  std::vector<std::size_t> search_space(space.size());
  std::iota(search_space.begin(), search_space.end(), std::size_t{0});

  auto accept = [&](std::size_t flag, const Configuration& config, double time) {
    baseline = config;
    result.time = time;
    result.accepted_times.push_back(time);
    std::erase(search_space, flag);
  };

  for (std::size_t round = 1;; ++round) {
    // Probe every remaining flag against the current baseline.
    std::vector<Configuration> probes;
    probes.reserve(search_space.size());
    for (auto i : search_space) probes.push_back(with_flag(baseline, i, FlagState::disabled));
    auto measured = evaluator.evaluate_batch(probes, bench);

    std::vector<std::pair<std::size_t, double>> rips;
    std::map<std::size_t, std::size_t> record_of;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      auto flag = search_space[k];
      auto& rec = trace.append(probes[k], "probe " + toggle_label(space, probes[k], flag));
      rec.measurements.emplace_back(bench.name, measured[k]);
      record_of[flag] = rec.sequence - 1;
      double r = measured[k].ok() ? rip(*measured[k].time, result.time) : std::numeric_limits<double>::infinity();
      rips.emplace_back(flag, r);
    }

    auto candidates = negative_sorted(std::move(rips));
    if (hooks.on_state) hooks.on_state({bench.name, round, search_space, baseline, result.time, candidates});
    if (candidates.empty()) break;

    {
      auto [first, r] = candidates.front();
      auto& rec = trace.records[record_of.at(first)];
      rec.annotation += " accepted";
      accept(first, rec.config, *rec.measurements.front().second.time);
    }
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      auto flag = candidates[k].first;
      auto config = with_flag(baseline, flag, FlagState::disabled);
      auto m = evaluator.evaluate(config, bench);
      auto& rec = trace.append(config, "reprobe " + toggle_label(space, config, flag));
      rec.measurements.emplace_back(bench.name, m);
      if (m.ok() && rip(*m.time, result.time) < 0) {
        rec.annotation += " accepted";
        accept(flag, config, *m.time);
      }
    }
  }
  result.config = baseline;
  return result;
}

std::string_view to_string(Aggregate a) noexcept {
  return a == Aggregate::arithmetic_mean ? "mean" : "geomean";
}

Aggregate parse_aggregate(std::string_view text) {
  if (text == "mean" || text == "arithmetic_mean") return Aggregate::arithmetic_mean;
  if (text == "geomean" || text == "geometric_mean") return Aggregate::geometric_mean;
  throw ParseError("unknown aggregate '" + std::string(text) + "'");
}

double aggregate(Aggregate a, std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("aggregate of nothing");
  if (a == Aggregate::arithmetic_mean) {
    double sum = 0.0;
    for (double r : ratios) sum += r;
    return sum / static_cast<double>(ratios.size());
  }
  double logs = 0.0;
  for (double r : ratios) logs += std::log(r);
  return std::exp(logs / static_cast<double>(ratios.size()));
}

SuiteCEResult run_suite_ce(const FlagSpace& space, const Suite& suite, Evaluator& evaluator,
                           const SuiteCEParams& params, const SearchHooks& hooks) {
  if (!(params.threshold_percent >= 0)) throw std::invalid_argument("threshold must be >= 0");
  if (suite.benchmarks.empty()) throw std::invalid_argument("suite-wide CE needs benchmarks");

  SuiteCEResult result;
  result.trace.method = "suite-ce";
  result.trace.campaign = "suite";
  auto& trace = result.trace;

  Configuration baseline = params.baseline ? *params.baseline : stock_baseline(space);
  validate(space, baseline);
  {
    auto& rec = trace.append(baseline, "reference");
    for (const auto& bench : suite.benchmarks) {
      auto m = evaluator.evaluate(baseline, bench);
      rec.measurements.emplace_back(bench.name, m);
      if (!m.ok())
        throw CampaignError("baseline fails on '" + bench.name + "' (" + std::string(to_string(m.status)) + ")");
      result.reference[bench.name] = *m.time;
    }
  }

  std::map<std::string, double> limit;
  for (const auto& [name, t] : result.reference) limit[name] = (1.0 + params.threshold_percent / 100.0) * t;

  auto objective_of = [&](const std::map<std::string, double>& times) {
    std::vector<double> ratios;
    ratios.reserve(suite.benchmarks.size());
    for (const auto& bench : suite.benchmarks) ratios.push_back(times.at(bench.name) / result.reference.at(bench.name));
    return aggregate(params.aggregate, ratios);
  };

  result.final_times = result.reference;
  double objective = objective_of(result.final_times);
  result.accepted_objectives.push_back(objective);

  // Evaluates in suite order, stopping at the first benchmark that fails or breaks its limit.
  auto probe = [&](const Configuration& config, std::string annotation) -> std::optional<std::map<std::string, double>> {
    auto& rec = trace.append(config, std::move(annotation));
    std::map<std::string, double> times;
    for (const auto& bench : suite.benchmarks) {
      auto m = evaluator.evaluate(config, bench);
      rec.measurements.emplace_back(bench.name, m);
      if (!m.ok() || *m.time > limit.at(bench.name)) {
        if (rec.measurements.size() < suite.benchmarks.size()) rec.annotation += " skipped";
        else rec.annotation += " rejected";
        return std::nullopt;
      }
      times[bench.name] = *m.time;
    }
    return times;
  };

  std::vector<std::size_t> search_space(space.size());
  std::iota(search_space.begin(), search_space.end(), std::size_t{0});

  auto accept = [&](std::size_t flag, const Configuration& config, std::map<std::string, double> times, double obj) {
    baseline = config;
    result.final_times = std::move(times);
    objective = obj;
    result.accepted_objectives.push_back(obj);
    std::erase(search_space, flag);
  };

  for (std::size_t round = 1;; ++round) {
    struct Probed {
      Configuration config;
      std::map<std::string, double> times;
      double objective;
      std::size_t record;
    };
    std::map<std::size_t, Probed> probed;
    std::vector<std::pair<std::size_t, double>> rips;
    for (auto flag : search_space) {
      auto config = toggle(baseline, flag);
      auto times = probe(config, "probe " + toggle_label(space, config, flag));
      if (!times) continue;
      double obj = objective_of(*times);
      rips.emplace_back(flag, rip(obj, objective));
      probed.emplace(flag, Probed{config, std::move(*times), obj, trace.size() - 1});
    }

    auto candidates = negative_sorted(std::move(rips));
    if (hooks.on_state) hooks.on_state({trace.campaign, round, search_space, baseline, objective, candidates});
    if (candidates.empty()) break;

    {
      auto& first = probed.at(candidates.front().first);
      trace.records[first.record].annotation += " accepted";
      accept(candidates.front().first, first.config, std::move(first.times), first.objective);
    }
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      auto flag = candidates[k].first;
      auto config = toggle(baseline, flag);
      auto times = probe(config, "reprobe " + toggle_label(space, config, flag));
      if (!times) continue;
      double obj = objective_of(*times);
      if (rip(obj, objective) < 0) {
        trace.records.back().annotation += " accepted";
        accept(flag, config, std::move(*times), obj);
      }
    }
  }
  result.config = baseline;
  return result;
}

BestKnown best_known(std::span<const CampaignTrace> traces, std::string_view benchmark) {
  std::optional<BestKnown> best;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    for (const auto& rec : traces[t].records) {
      const auto* m = rec.find(benchmark);
      if (m == nullptr || !m->ok()) continue;
      bool better = !best || *m->time < *best->measurement.time ||
                    (*m->time == *best->measurement.time && rec.sequence < best->sequence);
      if (better) best = BestKnown{*m, rec.config, rec.sequence, t, traces[t].method};
    }
  }
  if (!best) throw Error("no ok measurement for '" + std::string(benchmark) + "'");
  return *best;
}

}  // namespace flagtune
