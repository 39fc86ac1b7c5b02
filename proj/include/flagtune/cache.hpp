#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "flagtune/flagspace.hpp"
#include "flagtune/measurement.hpp"

namespace flagtune {

/// One line of the cache file.
struct CacheRecord {
  std::string benchmark;
  Configuration config;
  Measurement measurement;

  friend bool operator==(const CacheRecord&, const CacheRecord&) = default;
};

/// Measurements keyed by (benchmark, binary digest). Failed evaluations are keyed by
/// (benchmark, configuration) instead, so a broken configuration is never retried.
///
/// Readers may run concurrently; writers are serialized and visible to subsequent reads.
/// A file-backed cache appends one JSON line per new entry and holds an exclusive
/// advisory lock on the file for its lifetime.
class EvalCache {
 public:
  EvalCache();  // in-memory only
  ~EvalCache();
  EvalCache(const EvalCache&) = delete;
  EvalCache& operator=(const EvalCache&) = delete;

  /// Loads existing records and opens the file for appending.
  /// Throws Error when another process holds the lock.
  static std::unique_ptr<EvalCache> open(const std::filesystem::path& path);

  std::optional<Measurement> find(const std::string& benchmark, const Digest& digest) const;
  std::optional<Measurement> find_failure(const std::string& benchmark,
                                          const Configuration& config) const;

  /// Inserts unless the key is present; returns whether an entry was added.
  bool store(const std::string& benchmark, const Configuration& config,
             const Measurement& measurement);

  std::size_t size() const;
  /// All entries in insertion order.
  std::vector<CacheRecord> records() const;

 private:
  struct File;
  bool insert_locked(const CacheRecord& record);

  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::size_t> by_digest_;
  std::map<std::pair<std::string, std::string>, std::size_t> by_config_;
  std::vector<CacheRecord> records_;
  std::unique_ptr<File> file_;
};

}  // namespace flagtune
