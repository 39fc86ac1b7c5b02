#include "flagtune/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"
#include "flagtune/rng.hpp"

namespace flagtune {

namespace {

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

ReferenceTimes reference_from_traces(std::span<const CampaignTrace> traces) {
  ReferenceTimes ref;
  for (const auto& trace : traces)
    for (const auto& rec : trace.records) {
      if (!rec.annotation.starts_with("reference")) continue;
      for (const auto& [name, m] : rec.measurements)
        if (m.ok()) ref.try_emplace(name, *m.time);
    }
  return ref;
}

ReferenceTimes load_reference(const std::filesystem::path& path) {
  ReferenceTimes ref;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) throw ParseError("reference: expected 'benchmark<TAB>time'");
    auto t = parse_number(fields[1]);
    if (!t) {
      if (fields[1] == "time") continue;  // header
      throw ParseError("reference: bad time for " + fields[0]);
    }
    if (!(*t > 0)) throw ParseError("reference: time must be > 0 for " + fields[0]);
    ref[fields[0]] = *t;
  }
  return ref;
}

RelativeSeries floored_best_so_far(std::span<const CampaignTrace> traces, const ReferenceTimes& reference) {
  std::size_t length = 0;
  for (const auto& t : traces) length = std::max(length, t.size());
  if (length == 0) throw std::invalid_argument("floored series of an empty trace");
  if (reference.empty()) throw std::invalid_argument("floored series needs reference times");
  for (const auto& [name, t] : reference)
    if (!(t > 0)) throw std::invalid_argument("reference time for " + name + " must be > 0");
  for (const auto& t : traces)
    for (const auto& name : t.benchmarks())
      if (!reference.contains(name)) throw std::invalid_argument("no reference time for " + name);

  std::map<std::string, double> best;
  RelativeSeries series;
  series.description = "mean over benchmarks of min(1, best time so far / reference time)";
  for (std::size_t c = 0; c < length; ++c) {
    for (const auto& t : traces) {
      if (c >= t.size()) continue;
      for (const auto& [name, m] : t.records[c].measurements) {
        if (!m.ok()) continue;
        auto [it, inserted] = best.try_emplace(name, *m.time);
        if (!inserted) it->second = std::min(it->second, *m.time);
      }
    }
    double sum = 0.0;
    for (const auto& [name, t_ref] : reference) {
      auto it = best.find(name);
      sum += it == best.end() ? 1.0 : std::min(1.0, it->second / t_ref);
    }
    series.points.emplace_back(c + 1, sum / static_cast<double>(reference.size()));
  }
  return series;
}

RelativeSeries floored_best_so_far(const CampaignTrace& trace, const ReferenceTimes& reference) {
  return floored_best_so_far(std::span<const CampaignTrace>(&trace, 1), reference);
}

ComparisonTable compare_to_baseline(std::span<const CampaignTrace> traces, const ReferenceTimes& reference) {
  ComparisonTable table;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [name, t_ref] : reference) {
    ComparisonRow row;
    row.benchmark = name;
    try {
      auto best = best_known(traces, name);
      row.best_ratio = *best.measurement.time / t_ref;
      row.best_config = best.config;
      row.method = best.method;
      row.sequence = best.sequence;
      sum += *row.best_ratio;
      ++n;
    } catch (const Error&) {
    }
    table.rows.push_back(std::move(row));
  }
  table.mean_ratio = n == 0 ? 1.0 : sum / static_cast<double>(n);
  return table;
}

std::vector<std::string> FoldPlan::test_set(std::size_t fold) const {
  std::vector<std::string> out;
  for (const auto& p : programs)
    if (assignment.at(p) == fold) out.push_back(p);
  return out;
}

std::vector<std::string> FoldPlan::training_set(std::size_t fold) const {
  std::vector<std::string> out;
  for (const auto& p : programs)
    if (assignment.at(p) != fold) out.push_back(p);
  return out;
}

FoldPlan make_folds(std::span<const std::string> programs, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (programs.size() < k) throw std::invalid_argument("fewer programs than folds");
  std::set<std::string> unique(programs.begin(), programs.end());
  if (unique.size() != programs.size()) throw std::invalid_argument("duplicate program names");

  std::vector<std::size_t> order(programs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto rng = seeded_engine(seed, 0);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[uniform_below(rng, i + 1)]);

  FoldPlan plan;
  plan.k = k;
  plan.programs.assign(programs.begin(), programs.end());
  for (std::size_t pos = 0; pos < order.size(); ++pos) plan.assignment[programs[order[pos]]] = pos % k;
  return plan;
}

XvalResult run_xval(const FlagSpace& space, const Suite& suite, Evaluator& evaluator,
                    const SuiteCEParams& params, const FoldPlan& plan, const SearchHooks& hooks) {
  for (const auto& b : suite.benchmarks)
    if (!plan.assignment.contains(b.name)) throw std::invalid_argument("fold plan does not cover " + b.name);

  XvalResult result;
  const Configuration baseline = params.baseline ? *params.baseline : stock_baseline(space);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    FoldResult fr;
    fr.fold = fold;
    auto held_out = plan.test_set(fold);
    auto training = plan.training_set(fold);
    auto training_suite = suite.subset(training);
    auto test_suite = suite.subset(held_out);
    try {
      auto ce = run_suite_ce(space, training_suite, evaluator, params, hooks);
      for (const auto& name : ce.trace.benchmarks())
        if (std::find(held_out.begin(), held_out.end(), name) != held_out.end())
          throw std::logic_error("fold " + std::to_string(fold) + " trained on held-out program " + name);
      fr.trained = ce.config;
      fr.trace = std::move(ce.trace);
      fr.trace.campaign = "fold-" + std::to_string(fold);
    } catch (const CampaignError& e) {
      fr.error = e.what();
    }
    if (fr.trained) {
      for (const auto& bench : test_suite.benchmarks) {
        TestResult tr;
        tr.program = bench.name;
        auto ref = evaluator.evaluate(baseline, bench);
        if (!ref.ok()) {
          fr.error += (fr.error.empty() ? "" : "; ") + ("baseline fails on " + bench.name);
          fr.tests.push_back(std::move(tr));
          continue;
        }
        tr.reference = *ref.time;
        auto m = evaluator.evaluate(*fr.trained, bench);
        if (m.ok()) {
          tr.time = *m.time;
          tr.ratio = *m.time / tr.reference;
          sum += *tr.ratio;
          ++n;
        }
        fr.tests.push_back(std::move(tr));
      }
    }
    result.folds.push_back(std::move(fr));
  }
  result.mean_ratio = n == 0 ? 1.0 : sum / static_cast<double>(n);
  return result;
}

std::vector<FeatureVector> parse_feature_table(std::string_view document) {
  std::vector<FeatureVector> out;
  std::istringstream in{std::string(document)};
  std::string line;
  bool header = true;
  std::size_t width = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    auto fields = split(line, delim);
    if (header) {
      header = false;
      if (fields.size() < 2) throw ParseError("features: header needs a name column and at least one feature");
      width = fields.size() - 1;
      continue;
    }
    if (fields.size() - 1 != width)
      throw ParseError("features: row for '" + fields[0] + "' has " + std::to_string(fields.size() - 1) +
                       " features, expected " + std::to_string(width));
    FeatureVector fv;
    fv.program = fields[0];
    if (!seen.insert(fv.program).second) throw ParseError("features: duplicate program " + fv.program);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = parse_number(fields[i]);
      if (!v || !std::isfinite(*v)) throw ParseError("features: bad value for '" + fv.program + "'");
      fv.features.push_back(*v);
    }
    out.push_back(std::move(fv));
  }
  return out;
}

std::vector<FeatureVector> load_feature_table(const std::filesystem::path& path) {
  return parse_feature_table(read_text_file(path));
}

PerformanceTable performance_table(std::span<const CampaignTrace> traces, std::string_view benchmark) {
  PerformanceTable table;
  for (const auto& t : traces)
    for (const auto& rec : t.records)
      if (const auto* m = rec.find(benchmark); m != nullptr && m->ok()) table.push_back({rec.config, *m->time});
  return table;
}

Prediction predict_1nn(const FeatureVector& query, std::span<const TrainingProgram> training, bool normalize) {
  if (training.empty()) throw std::invalid_argument("1NN needs training programs");
  const auto dim = query.features.size();
  for (const auto& t : training)
    if (t.features.features.size() != dim)
      throw std::invalid_argument("feature dimension mismatch for " + t.features.program);

  std::vector<double> mean(dim, 0.0), scale(dim, 1.0);
  if (normalize) {
    const auto n = static_cast<double>(training.size());
    for (const auto& t : training)
      for (std::size_t d = 0; d < dim; ++d) mean[d] += t.features.features[d];
    for (auto& m : mean) m /= n;
    std::vector<double> var(dim, 0.0);
    for (const auto& t : training)
      for (std::size_t d = 0; d < dim; ++d) {
        double dev = t.features.features[d] - mean[d];
        var[d] += dev * dev;
      }
    // A constant feature cannot separate programs; it is left unscaled.
    for (std::size_t d = 0; d < dim; ++d) scale[d] = var[d] > 0 ? std::sqrt(var[d] / n) : 1.0;
  }
  auto z = [&](const std::vector<double>& raw, std::size_t d) { return (raw[d] - mean[d]) / scale[d]; };

  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < training.size(); ++i) {
    double dist2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = z(training[i].features.features, d) - z(query.features, d);
      dist2 += diff * diff;
    }
    if (dist2 < best) {
      best = dist2;
      nearest = i;
    }
  }

  const auto& table = training[nearest].table;
  if (table.empty()) throw Error("nearest program '" + training[nearest].features.program + "' has no measurements");
  const PerformanceEntry* pick = &table.front();
  for (const auto& e : table)
    if (e.time < pick->time) pick = &e;
  return {pick->config, training[nearest].features.program, std::sqrt(best)};
}

}  // namespace flagtune
