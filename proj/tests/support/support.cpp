#include "support.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace flagtune::testing {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

FlagSpace make_space(std::size_t n, std::vector<bool> in_default) {
  std::vector<FlagDescriptor> flags;
  for (std::size_t i = 0; i < n; ++i) {
    auto name = "f" + std::to_string(i);
    flags.push_back({name, "-f" + name, "-fno-" + name, i < in_default.size() ? bool(in_default[i]) : true});
  }
  return FlagSpace(std::move(flags), {{"O1", "-O1"}, {"O2", "-O2"}, {"O3", "-O3"}}, "O3");
}

double reference_time(const FlagSpace& space, const BenchmarkModel& model, const Configuration& config) {
  double mult = 1.0;
  if (auto it = model.level_multiplier.find(config.base_level()); it != model.level_multiplier.end())
    mult = it->second;
  double t = model.base_time * mult;
  // Flag terms in flag order, then pair terms in listed order: the same summation order
  // as the documented formula, so results compare exactly.
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto it = model.flag_delta.find(space.flag(i).name);
    if (it == model.flag_delta.end()) continue;
    t += config.enabled(i) ? it->second.on : it->second.off;
  }
  for (const auto& p : model.pair_delta) {
    auto a = *space.index_of(p.first);
    auto b = *space.index_of(p.second);
    if (config.state(a) == p.first_state && config.state(b) == p.second_state) t += p.delta;
  }
  return t;
}

ReferenceOptimum reference_optimum(const FlagSpace& space, const BenchmarkModel& model, const std::string& level) {
  const auto n = space.size();
  ReferenceOptimum best{Configuration(), std::numeric_limits<double>::infinity()};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<FlagState> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1 ? FlagState::enabled : FlagState::disabled;
    Configuration c(level, a);
    double t = reference_time(space, model, c);
    if (t < best.time) best = {c, t};
  }
  return best;
}

BenchmarkModel random_additive(std::mt19937_64& rng, const FlagSpace& space) {
  std::uniform_int_distribution<int> base(300, 1000), delta(-20, 20);
  BenchmarkModel m;
  m.base_time = base(rng);
  m.level_multiplier = {{"O1", 1.25}, {"O2", 1.125}, {"O3", 1.0}};
  for (const auto& f : space.flags()) m.flag_delta[f.name] = {static_cast<double>(delta(rng)), 0.0};
  return m;
}

BenchmarkModel random_interacting(std::mt19937_64& rng, const FlagSpace& space) {
  std::uniform_int_distribution<int> base(400, 1000), delta(-15, 15), pair_delta(-10, 10), coin(0, 1);
  BenchmarkModel m;
  m.base_time = base(rng);
  for (const auto& f : space.flags()) m.flag_delta[f.name] = {double(delta(rng)), double(delta(rng))};
  if (space.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    for (int k = 0; k < 4; ++k) {
      auto a = pick(rng), b = pick(rng);
      if (a == b) continue;
      m.pair_delta.push_back({space.flag(a).name, space.flag(b).name,
                              coin(rng) ? FlagState::enabled : FlagState::disabled,
                              coin(rng) ? FlagState::enabled : FlagState::disabled, double(pair_delta(rng))});
    }
  }
  return m;
}

SyntheticModel pair_model(const FlagSpace& space, const std::string& bench) {
  BenchmarkModel m;
  m.base_time = 100;
  m.flag_delta[space.flag(0).name] = {0.0, 5.0};
  m.flag_delta[space.flag(1).name] = {0.0, 5.0};
  m.pair_delta.push_back({space.flag(0).name, space.flag(1).name, FlagState::disabled, FlagState::disabled, -20.0});
  return SyntheticModel(space, {{bench, m}});
}

}  // namespace flagtune::testing
