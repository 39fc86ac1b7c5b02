#include "flagtune/checkpoint.hpp"

#include "flagtune/error.hpp"

namespace flagtune {

using json = nlohmann::ordered_json;

namespace {

json eval_json(const std::string& bench, const Configuration& config, const Measurement& m) {
  json j;
  j["kind"] = "eval";
  j["benchmark"] = bench;
  j["base_level"] = config.base_level();
  j["bitstring"] = config.bitstring();
  j["status"] = std::string(to_string(m.status));
  j["time"] = m.time ? json(*m.time) : json(nullptr);
  j["digest_algo"] = m.digest ? json(m.digest->algorithm) : json(nullptr);
  j["digest"] = m.digest ? json(m.digest->hex) : json(nullptr);
  j["cached"] = m.cached;
  return j;
}

}  // namespace

json to_json(const CEState& state) {
  json j;
  j["kind"] = "state";
  j["campaign"] = state.campaign;
  j["round"] = state.round;
  j["search_space"] = state.search_space;
  j["base_level"] = state.baseline.base_level();
  j["bitstring"] = state.baseline.bitstring();
  j["objective"] = state.objective;
  j["candidates"] = json::array();
  for (const auto& [flag, r] : state.candidates) j["candidates"].push_back(json{{"flag", flag}, {"rip", r}});
  return j;
}

CheckpointLog load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint " + path.string());
  CheckpointLog log;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError("checkpoint " + path.string() + ": malformed line");
    }
    try {
      auto kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        log.header = std::move(j);
        have_header = true;
      } else if (kind == "eval") {
        CheckpointLog::Eval e;
        e.benchmark = j.at("benchmark").get<std::string>();
        e.config = Configuration::from_bitstring(j.at("base_level").get<std::string>(), j.at("bitstring").get<std::string>());
        e.measurement.status = parse_status(j.at("status").get<std::string>());
        if (!j.at("time").is_null()) e.measurement.time = j.at("time").get<double>();
        if (!j.at("digest").is_null())
          e.measurement.digest = Digest{j.at("digest_algo").get<std::string>(), j.at("digest").get<std::string>()};
        e.measurement.cached = j.value("cached", false);
        log.evals.push_back(std::move(e));
      } else if (kind == "state") {
        log.states.push_back(std::move(j));
      } else {
        throw ParseError("checkpoint: unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("checkpoint: ") + e.what());
    }
  }
  if (!have_header) throw ParseError("checkpoint " + path.string() + " has no header");
  return log;
}

CheckpointingEvaluator::CheckpointingEvaluator(Evaluator& inner, const std::filesystem::path& path, json header,
                                               std::optional<CheckpointLog> resume, Options options)
    : inner_(inner), resume_(std::move(resume)), options_(options) {
  header["kind"] = "header";
  if (resume_) {
    auto expected = header;
    auto found = resume_->header;
    if (expected != found) throw Error("checkpoint was written for different inputs");
  }
  out_.open(path, std::ios::trunc);
  if (!out_) throw Error("cannot write checkpoint " + path.string());
  write_line(header);
}

void CheckpointingEvaluator::write_line(const json& j) {
  out_ << j.dump() << '\n';
  out_.flush();
}

std::optional<Measurement> CheckpointingEvaluator::next_replay(const Configuration& config, const Benchmark& bench) {
  if (!resume_ || replay_pos_ >= resume_->evals.size()) return std::nullopt;
  const auto& e = resume_->evals[replay_pos_];
  if (e.benchmark != bench.name || e.config != config)
    throw Error("checkpoint diverges at evaluation " + std::to_string(replay_pos_ + 1) + ": expected " + e.benchmark +
                " " + e.config.key() + ", campaign asked for " + bench.name + " " + config.key());
  ++replay_pos_;
  inner_.prime(config, bench, e.measurement);
  ++replay_stats_.evaluations;
  if (e.measurement.cached)
    ++replay_stats_.cache_hits;
  else
    ++replay_stats_.executions;
  return e.measurement;
}

void CheckpointingEvaluator::check_stop(std::size_t wanted) {
  if (options_.stop && options_.stop->load()) throw Interrupted("stop requested");
  if (options_.stop_after && fresh_ + wanted > *options_.stop_after) throw Interrupted("evaluation budget reached");
}

void CheckpointingEvaluator::log_eval(const Configuration& config, const Benchmark& bench, const Measurement& m) {
  write_line(eval_json(bench.name, config, m));
}

Measurement CheckpointingEvaluator::evaluate(const Configuration& config, const Benchmark& bench) {
  if (auto m = next_replay(config, bench)) {
    log_eval(config, bench, *m);
    return *m;
  }
  check_stop(1);
  auto m = inner_.evaluate(config, bench);
  ++fresh_;
  log_eval(config, bench, m);
  return m;
}

std::vector<Measurement> CheckpointingEvaluator::evaluate_batch(std::span<const Configuration> configs,
                                                                const Benchmark& bench) {
  std::vector<Measurement> out;
  out.reserve(configs.size());
  std::size_t i = 0;
  for (; i < configs.size(); ++i) {
    auto m = next_replay(configs[i], bench);
    if (!m) break;
    log_eval(configs[i], bench, *m);
    out.push_back(*m);
  }
  if (i == configs.size()) return out;

  auto rest = configs.subspan(i);
  if (options_.stop && options_.stop->load()) throw Interrupted("stop requested");
  if (options_.stop_after && fresh_ + rest.size() > *options_.stop_after) {
    // Spend the remaining budget one at a time, then stop.
    for (const auto& c : rest) out.push_back(evaluate(c, bench));
    return out;
  }
  auto fresh = inner_.evaluate_batch(rest, bench);
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    ++fresh_;
    log_eval(rest[k], bench, fresh[k]);
    out.push_back(std::move(fresh[k]));
  }
  return out;
}

void CheckpointingEvaluator::prime(const Configuration& config, const Benchmark& bench, const Measurement& m) {
  inner_.prime(config, bench, m);
}

EvalStats CheckpointingEvaluator::stats() const {
  auto s = replay_stats_;
  s += inner_.stats();
  return s;
}

void CheckpointingEvaluator::record_state(const CEState& state) {
  auto j = to_json(state);
  if (resume_ && state_pos_ < resume_->states.size()) {
    if (resume_->states[state_pos_] != j)
      throw Error("checkpoint state " + std::to_string(state_pos_ + 1) + " does not match the resumed search");
  }
  ++state_pos_;
  write_line(j);
}

}  // namespace flagtune
