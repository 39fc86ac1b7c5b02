#include "flagtune/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"

namespace flagtune {

using json = nlohmann::ordered_json;

namespace {

std::string digest_key(const Digest& d) { return d.algorithm + ":" + d.hex; }

json to_json(const CacheRecord& r) {
  json j;
  j["benchmark"] = r.benchmark;
  j["digest_algo"] = r.measurement.digest ? json(r.measurement.digest->algorithm) : json(nullptr);
  j["digest"] = r.measurement.digest ? json(r.measurement.digest->hex) : json(nullptr);
  j["status"] = std::string(to_string(r.measurement.status));
  j["time"] = r.measurement.time ? json(*r.measurement.time) : json(nullptr);
  j["base_level"] = r.config.base_level();
  j["config_bitstring"] = r.config.bitstring();
  return j;
}

CacheRecord from_json(const json& j) {
  CacheRecord r;
  r.benchmark = j.at("benchmark").get<std::string>();
  r.config = Configuration::from_bitstring(j.at("base_level").get<std::string>(),
                                           j.at("config_bitstring").get<std::string>());
  r.measurement.status = parse_status(j.at("status").get<std::string>());
  if (!j.at("time").is_null()) r.measurement.time = j.at("time").get<double>();
  if (!j.at("digest").is_null())
    r.measurement.digest = Digest{j.at("digest_algo").get<std::string>(), j.at("digest").get<std::string>()};
  if (r.measurement.ok() != r.measurement.time.has_value())
    throw ParseError("cache record for " + r.benchmark + ": time present iff status ok");
  return r;
}

}  // namespace

struct EvalCache::File {
  std::filesystem::path path;
  int lock_fd = -1;
  std::ofstream out;

  ~File() {
    if (lock_fd >= 0) {
      ::flock(lock_fd, LOCK_UN);
      ::close(lock_fd);
    }
  }
};

EvalCache::EvalCache() = default;
EvalCache::~EvalCache() = default;

std::unique_ptr<EvalCache> EvalCache::open(const std::filesystem::path& path) {
  auto cache = std::make_unique<EvalCache>();
  auto file = std::make_unique<File>();
  file->path = path;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  file->lock_fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (file->lock_fd < 0) throw Error("cannot open cache " + path.string() + ": " + std::strerror(errno));
  if (::flock(file->lock_fd, LOCK_EX | LOCK_NB) != 0)
    throw Error("cache " + path.string() + " is locked by another process");

  std::ifstream in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      // A torn final line from an interrupted append is dropped.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError("cache " + path.string() + ": bad record on line " + std::to_string(lineno));
    }
    try {
      cache->insert_locked(from_json(j));
    } catch (const json::exception& e) {
      throw ParseError("cache " + path.string() + ": " + e.what());
    }
  }
  file->out.open(path, std::ios::app);
  if (!file->out) throw Error("cannot append to cache " + path.string());
  cache->file_ = std::move(file);
  return cache;
}

bool EvalCache::insert_locked(const CacheRecord& record) {
  const auto& m = record.measurement;
  if (m.ok()) {
    if (!m.digest) throw StructuralError("ok measurement without digest");
    auto key = std::make_pair(record.benchmark, digest_key(*m.digest));
    if (by_digest_.contains(key)) return false;
    by_digest_.emplace(std::move(key), records_.size());
  } else {
    auto key = std::make_pair(record.benchmark, record.config.key());
    if (by_config_.contains(key)) return false;
    by_config_.emplace(std::move(key), records_.size());
  }
  records_.push_back(record);
  records_.back().measurement.cached = false;
  return true;
}

std::optional<Measurement> EvalCache::find(const std::string& benchmark, const Digest& digest) const {
  std::shared_lock lock(mutex_);
  auto it = by_digest_.find({benchmark, digest_key(digest)});
  if (it == by_digest_.end()) return std::nullopt;
  return records_[it->second].measurement;
}

std::optional<Measurement> EvalCache::find_failure(const std::string& benchmark,
                                                   const Configuration& config) const {
  std::shared_lock lock(mutex_);
  auto it = by_config_.find({benchmark, config.key()});
  if (it == by_config_.end()) return std::nullopt;
  return records_[it->second].measurement;
}

bool EvalCache::store(const std::string& benchmark, const Configuration& config,
                      const Measurement& measurement) {
  std::unique_lock lock(mutex_);
  CacheRecord record{benchmark, config, measurement};
  if (!insert_locked(record)) return false;
  if (file_) {
    file_->out << to_json(records_.back()).dump() << '\n';
    file_->out.flush();
  }
  return true;
}

std::size_t EvalCache::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<CacheRecord> EvalCache::records() const {
  std::shared_lock lock(mutex_);
  return records_;
}

}  // namespace flagtune
