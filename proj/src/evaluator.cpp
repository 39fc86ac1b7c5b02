#include "flagtune/evaluator.hpp"

#include <algorithm>
#include <future>
#include <limits>

namespace flagtune {

std::vector<Measurement> Evaluator::evaluate_batch(std::span<const Configuration> configs,
                                                   const Benchmark& bench) {
  std::vector<Measurement> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(evaluate(c, bench));
  return out;
}

CachingEvaluator::CachingEvaluator(const FlagSpace& space, std::unique_ptr<Backend> backend,
                                   EvalCache* cache, unsigned compile_jobs)
    : space_(space),
      backend_(std::move(backend)),
      owned_cache_(cache ? nullptr : std::make_unique<EvalCache>()),
      cache_(cache ? cache : owned_cache_.get()),
      compile_jobs_(std::max(1u, compile_jobs)) {}

CachingEvaluator::Pending CachingEvaluator::prepare(const Configuration& config,
                                                    const Benchmark& bench) {
  validate(space_, config);
  Pending p;
  if (auto failed = cache_->find_failure(bench.name, config)) {
    failed->cached = true;
    p.done = *failed;
    return p;
  }
  p.compiled = backend_->compile(config, bench);
  {
    std::lock_guard lock(stats_mutex_);
    ++stats_.compilations;
  }
  if (!p.compiled.ok) {
    backend_->discard(p.compiled);
    auto m = Measurement::failure(Status::compile_error);
    cache_->store(bench.name, config, m);
    p.done = m;
  }
  return p;
}

Measurement CachingEvaluator::finish(const Configuration& config, const Benchmark& bench,
                                     Pending& pending) {
  if (pending.done) {
    std::lock_guard lock(stats_mutex_);
    ++stats_.evaluations;
    if (pending.done->cached) ++stats_.cache_hits;
    return *pending.done;
  }

  Measurement result;
  bool executed = false;
  int runs = 0;
  {
    std::lock_guard device(device_);
    if (auto hit = cache_->find(bench.name, pending.compiled.digest)) {
      result = *hit;
      result.cached = true;
    } else {
      double best = std::numeric_limits<double>::infinity();
      Status status = Status::ok;
      for (int r = 0; r < bench.repeat_runs; ++r) {
        auto outcome = backend_->run(bench, pending.compiled);
        ++runs;
        if (outcome.status != Status::ok) {
          status = outcome.status;
          break;
        }
        best = std::min(best, outcome.seconds);
      }
      executed = true;
      result = status == Status::ok ? Measurement::success(best, pending.compiled.digest)
                                    : Measurement::failure(status, pending.compiled.digest);
      cache_->store(bench.name, config, result);
    }
  }
  backend_->discard(pending.compiled);

  std::lock_guard lock(stats_mutex_);
  ++stats_.evaluations;
  stats_.runs += static_cast<std::size_t>(runs);
  if (executed)
    ++stats_.executions;
  else
    ++stats_.cache_hits;
  return result;
}

Measurement CachingEvaluator::evaluate(const Configuration& config, const Benchmark& bench) {
  auto pending = prepare(config, bench);
  return finish(config, bench, pending);
}

std::vector<Measurement> CachingEvaluator::evaluate_batch(std::span<const Configuration> configs,
                                                          const Benchmark& bench) {
  std::vector<Pending> pending(configs.size());
  if (compile_jobs_ <= 1 || configs.size() <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) pending[i] = prepare(configs[i], bench);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) pending[i] = prepare(configs[i], bench);
    };
    std::vector<std::future<void>> workers;
    auto n = std::min<std::size_t>(compile_jobs_, configs.size());
    for (std::size_t w = 0; w < n; ++w) workers.push_back(std::async(std::launch::async, worker));
    for (auto& w : workers) w.get();
  }
  std::vector<Measurement> out;
  out.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) out.push_back(finish(configs[i], bench, pending[i]));
  return out;
}

void CachingEvaluator::prime(const Configuration& config, const Benchmark& bench,
                             const Measurement& m) {
  if (m.ok() && !m.digest) return;
  cache_->store(bench.name, config, m);
}

EvalStats CachingEvaluator::stats() const {
  std::lock_guard lock(stats_mutex_);
  return stats_;
}

}  // namespace flagtune
