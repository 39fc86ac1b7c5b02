#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "flagtune/benchmark.hpp"
#include "flagtune/cache.hpp"
#include "flagtune/flagspace.hpp"
#include "flagtune/measurement.hpp"

namespace flagtune {

struct CompileOutcome {
  bool ok = false;
  Digest digest;
  std::filesystem::path binary;  // empty for backends without real binaries
};

struct RunOutcome {
  Status status = Status::ok;
  double seconds = 0.0;
};

/// Turns a configuration into a binary and a binary into a timing.
/// compile() may be called concurrently; run() calls are serialized by the caller.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompileOutcome compile(const Configuration& config, const Benchmark& bench) = 0;
  virtual RunOutcome run(const Benchmark& bench, const CompileOutcome& binary) = 0;
  /// Called once the binary is no longer needed.
  virtual void discard(const CompileOutcome&) {}
};

struct EvalStats {
  std::size_t evaluations = 0;  // evaluate() results handed out
  std::size_t compilations = 0;
  std::size_t executions = 0;  // measurements that ran the binary (repeat_runs processes each)
  std::size_t runs = 0;        // individual timed processes
  std::size_t cache_hits = 0;

  EvalStats& operator+=(const EvalStats& o) {
    evaluations += o.evaluations;
    compilations += o.compilations;
    executions += o.executions;
    runs += o.runs;
    cache_hits += o.cache_hits;
    return *this;
  }
  friend bool operator==(const EvalStats&, const EvalStats&) = default;
};

/// Source of measurements for the search strategies.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Measurement evaluate(const Configuration& config, const Benchmark& bench) = 0;
  /// Results in submission order. The default evaluates one after another.
  virtual std::vector<Measurement> evaluate_batch(std::span<const Configuration> configs,
                                                  const Benchmark& bench);
  /// Makes a measurement known without executing anything (used when resuming).
  virtual void prime(const Configuration& config, const Benchmark& bench, const Measurement& m) = 0;
  virtual EvalStats stats() const = 0;
};

/// Compile, digest, look up, and only then execute.
///
/// Compilation of a batch runs on up to `compile_jobs` threads. Timed executions are
/// strictly serialized in submission order, and the cache lookup for a binary happens
/// inside that serialized section, so two binaries with equal digests execute once.
class CachingEvaluator : public Evaluator {
 public:
  /// With a null `cache`, an in-memory cache owned by the evaluator is used.
  CachingEvaluator(const FlagSpace& space, std::unique_ptr<Backend> backend,
                   EvalCache* cache = nullptr, unsigned compile_jobs = 1);

  Measurement evaluate(const Configuration& config, const Benchmark& bench) override;
  std::vector<Measurement> evaluate_batch(std::span<const Configuration> configs,
                                          const Benchmark& bench) override;
  void prime(const Configuration& config, const Benchmark& bench, const Measurement& m) override;
  EvalStats stats() const override;

  EvalCache& cache() noexcept { return *cache_; }

 private:
  struct Pending {
    std::optional<Measurement> done;  // resolved before execution
    CompileOutcome compiled;
  };

  Pending prepare(const Configuration& config, const Benchmark& bench);
  Measurement finish(const Configuration& config, const Benchmark& bench, Pending& pending);

  const FlagSpace& space_;
  std::unique_ptr<Backend> backend_;
  std::unique_ptr<EvalCache> owned_cache_;
  EvalCache* cache_;
  unsigned compile_jobs_;
  std::mutex device_;
  mutable std::mutex stats_mutex_;
  EvalStats stats_;
};

}  // namespace flagtune
