#include "flagtune/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <json.hpp>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"

namespace flagtune {

using json = nlohmann::ordered_json;

SyntheticModel::SyntheticModel(const FlagSpace& space, std::map<std::string, BenchmarkModel> benchmarks)
    : space_(space), specs_(std::move(benchmarks)) {
  for (const auto& [name, spec] : specs_) {
    if (!(spec.base_time > 0) || !std::isfinite(spec.base_time))
      throw ParseError("model '" + name + "': base_time must be finite and > 0");
    Bound b;
    b.base_time = spec.base_time;
    b.level_multiplier.assign(space.base_levels().size(), 1.0);
    for (const auto& [level, factor] : spec.level_multiplier) {
      auto li = space.level_index(level);
      if (!li) throw ParseError("model '" + name + "': unknown base level '" + level + "'");
      if (!(factor > 0) || !std::isfinite(factor))
        throw ParseError("model '" + name + "': level multiplier must be finite and > 0");
      b.level_multiplier[*li] = factor;
    }
    b.effects.assign(space.size(), FlagEffect{});
    for (const auto& [flag, effect] : spec.flag_delta) {
      auto fi = space.index_of(flag);
      if (!fi) throw ParseError("model '" + name + "': unknown flag '" + flag + "'");
      if (!std::isfinite(effect.on) || !std::isfinite(effect.off))
        throw ParseError("model '" + name + "': non-finite delta for '" + flag + "'");
      b.effects[*fi] = effect;
    }
    // Joint-state sums per unordered pair; at most one joint state is active at a time.
    std::map<std::pair<std::size_t, std::size_t>, std::array<double, 4>> joint;
    for (const auto& term : spec.pair_delta) {
      auto i = space.index_of(term.first);
      auto j = space.index_of(term.second);
      if (!i || !j) throw ParseError("model '" + name + "': unknown flag in pair term");
      if (*i == *j) throw ParseError("model '" + name + "': pair term names one flag twice");
      if (!std::isfinite(term.delta)) throw ParseError("model '" + name + "': non-finite pair delta");
      b.pairs.push_back({*i, *j, term.first_state, term.second_state, term.delta});
      auto lo = std::min(*i, *j), hi = std::max(*i, *j);
      auto lo_state = *i < *j ? term.first_state : term.second_state;
      auto hi_state = *i < *j ? term.second_state : term.first_state;
      auto& sums = joint.try_emplace({lo, hi}, std::array<double, 4>{}).first->second;
      sums[static_cast<int>(lo_state) * 2 + static_cast<int>(hi_state)] += term.delta;
    }
    double bound = spec.base_time * *std::min_element(b.level_multiplier.begin(), b.level_multiplier.end());
    for (const auto& e : b.effects) bound += std::min(e.on, e.off);
    for (const auto& [key, sums] : joint) bound += std::min(0.0, *std::min_element(sums.begin(), sums.end()));
    if (!(bound > 0))
      throw ParseError("model '" + name + "': some configuration would have non-positive time (bound " +
                       format_double(bound) + ")");
    b.lower_bound = bound;
    bound_.emplace(name, std::move(b));
  }
}

bool SyntheticModel::models(std::string_view benchmark) const { return bound_.find(benchmark) != bound_.end(); }

std::vector<std::string> SyntheticModel::benchmark_names() const {
  std::vector<std::string> out;
  for (const auto& [name, spec] : specs_) out.push_back(name);
  return out;
}

const BenchmarkModel& SyntheticModel::spec(std::string_view benchmark) const {
  auto it = specs_.find(std::string(benchmark));
  if (it == specs_.end()) throw Error("benchmark '" + std::string(benchmark) + "' is not modeled");
  return it->second;
}

const SyntheticModel::Bound& SyntheticModel::bound(std::string_view benchmark) const {
  auto it = bound_.find(benchmark);
  if (it == bound_.end()) throw Error("benchmark '" + std::string(benchmark) + "' is not modeled");
  return it->second;
}

double SyntheticModel::time(const Configuration& config, std::string_view benchmark) const {
  const auto& b = bound(benchmark);
  validate(space_, config);
  double t = b.base_time * b.level_multiplier[*space_.level_index(config.base_level())];
  for (std::size_t i = 0; i < b.effects.size(); ++i)
    t += config.enabled(i) ? b.effects[i].on : b.effects[i].off;
  for (const auto& p : b.pairs)
    if (config.state(p.first) == p.first_state && config.state(p.second) == p.second_state) t += p.delta;
  return t;
}

double SyntheticModel::lower_bound(std::string_view benchmark) const { return bound(benchmark).lower_bound; }

Measurement evaluate_synthetic(const Configuration& config, std::string_view benchmark,
                               const SyntheticModel& model, std::string_view digest_algorithm) {
  double t = model.time(config, benchmark);
  return Measurement::success(t, digest_bytes(digest_algorithm, config.key()));
}

namespace {

FlagState parse_state(const json& j) {
  auto s = j.get<std::string>();
  if (s == "on") return FlagState::enabled;
  if (s == "off") return FlagState::disabled;
  throw ParseError("pair state must be 'on' or 'off', got '" + s + "'");
}

const char* state_name(FlagState s) { return s == FlagState::enabled ? "on" : "off"; }

}  // namespace

SyntheticModel parse_synthetic_model(std::string_view document, const FlagSpace& space) {
  std::map<std::string, BenchmarkModel> specs;
  try {
    auto doc = json::parse(document);
    for (const auto& [name, entry] : doc.at("benchmarks").items()) {
      BenchmarkModel m;
      m.base_time = entry.at("base_time").get<double>();
      if (entry.contains("level_multiplier"))
        for (const auto& [level, factor] : entry.at("level_multiplier").items())
          m.level_multiplier[level] = factor.get<double>();
      if (entry.contains("flag_delta")) {
        for (const auto& [flag, delta] : entry.at("flag_delta").items()) {
          FlagEffect e;
          if (delta.is_number()) {
            e.on = delta.get<double>();
          } else {
            e.on = delta.value("on", 0.0);
            e.off = delta.value("off", 0.0);
          }
          m.flag_delta[flag] = e;
        }
      }
      if (entry.contains("pair_delta")) {
        for (const auto& p : entry.at("pair_delta")) {
          const auto& flags = p.at("flags");
          const auto& state = p.at("state");
          if (flags.size() != 2 || state.size() != 2)
            throw ParseError("model '" + name + "': pair term needs two flags and two states");
          m.pair_delta.push_back({flags[0].get<std::string>(), flags[1].get<std::string>(),
                                  parse_state(state[0]), parse_state(state[1]), p.at("delta").get<double>()});
        }
      }
      if (!specs.emplace(name, std::move(m)).second) throw ParseError("model: duplicate benchmark " + name);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  return SyntheticModel(space, std::move(specs));
}

SyntheticModel load_synthetic_model(const std::filesystem::path& path, const FlagSpace& space) {
  return parse_synthetic_model(read_text_file(path), space);
}

std::string serialize_synthetic_model(const SyntheticModel& model) {
  json doc;
  doc["benchmarks"] = json::object();
  for (const auto& [name, m] : model.specs()) {
    json entry;
    entry["base_time"] = m.base_time;
    entry["level_multiplier"] = json::object();
    for (const auto& [level, factor] : m.level_multiplier) entry["level_multiplier"][level] = factor;
    entry["flag_delta"] = json::object();
    for (const auto& [flag, e] : m.flag_delta) entry["flag_delta"][flag] = json{{"on", e.on}, {"off", e.off}};
    entry["pair_delta"] = json::array();
    for (const auto& p : m.pair_delta)
      entry["pair_delta"].push_back(json{{"flags", {p.first, p.second}},
                                         {"state", {state_name(p.first_state), state_name(p.second_state)}},
                                         {"delta", p.delta}});
    doc["benchmarks"][name] = std::move(entry);
  }
  return doc.dump(2) + "\n";
}

CompileOutcome SyntheticBackend::compile(const Configuration& config, const Benchmark& bench) {
  auto m = evaluate_synthetic(config, bench.name, model_, algorithm_);
  std::lock_guard lock(mutex_);
  pending_[bench.name + "/" + m.digest->hex] = *m.time;
  return {true, *m.digest, {}};
}

RunOutcome SyntheticBackend::run(const Benchmark& bench, const CompileOutcome& binary) {
  std::lock_guard lock(mutex_);
  auto it = pending_.find(bench.name + "/" + binary.digest.hex);
  if (it == pending_.end()) throw Error("synthetic run without compile for " + bench.name);
  return {Status::ok, it->second};
}

}  // namespace flagtune
