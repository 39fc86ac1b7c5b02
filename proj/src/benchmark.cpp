#include "flagtune/benchmark.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"
#include "flagtune/measurement.hpp"

namespace flagtune {

using json = nlohmann::ordered_json;

const Benchmark* Suite::find(std::string_view name) const {
  for (const auto& b : benchmarks)
    if (b.name == name) return &b;
  return nullptr;
}

std::vector<std::string> Suite::names() const {
  std::vector<std::string> out;
  out.reserve(benchmarks.size());
  for (const auto& b : benchmarks) out.push_back(b.name);
  return out;
}

Suite Suite::subset(std::span<const std::string> keep) const {
  Suite out;
  out.timing = timing;
  for (const auto& b : benchmarks)
    if (std::find(keep.begin(), keep.end(), b.name) != keep.end()) out.benchmarks.push_back(b);
  return out;
}

Suite parse_suite(std::string_view document, bool require_commands) {
  Suite suite;
  try {
    auto doc = json::parse(document);
    auto timing = doc.value("timing", std::string("reported"));
    if (timing == "reported")
      suite.timing = TimingMode::reported;
    else if (timing == "external")
      suite.timing = TimingMode::external;
    else
      throw ParseError("suite: unknown timing '" + timing + "'");

    std::set<std::string> seen;
    for (const auto& entry : doc.at("benchmarks")) {
      Benchmark b;
      if (entry.is_string()) {
        b.name = entry.get<std::string>();
      } else {
        b.name = entry.at("name").get<std::string>();
        b.compile_command = entry.value("compile", std::string());
        b.run_command = entry.value("run", std::string());
        b.timeout = std::chrono::duration<double>(entry.value("timeout", 60.0));
        b.repeat_runs = entry.value("repeat_runs", 1);
        b.working_dir = entry.value("working_dir", std::string());
      }
      if (b.name.empty()) throw ParseError("suite: benchmark with empty name");
      if (!seen.insert(b.name).second) throw ParseError("suite: duplicate benchmark '" + b.name + "'");
      if (!(b.timeout.count() > 0)) throw ParseError("suite: timeout must be > 0 for " + b.name);
      if (b.repeat_runs < 1) throw ParseError("suite: repeat_runs must be >= 1 for " + b.name);
      if (require_commands && (b.compile_command.empty() || b.run_command.empty()))
        throw ParseError("suite: benchmark '" + b.name + "' needs compile and run commands");
      suite.benchmarks.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("suite: ") + e.what());
  }
  if (suite.benchmarks.empty()) throw ParseError("suite: no benchmarks");
  return suite;
}

Suite load_suite(const std::filesystem::path& path, bool require_commands) {
  auto suite = parse_suite(read_text_file(path), require_commands);
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  for (auto& b : suite.benchmarks) {
    if (b.working_dir.empty())
      b.working_dir = dir;
    else if (b.working_dir.is_relative())
      b.working_dir = dir / b.working_dir;
  }
  return suite;
}

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::ok: return "ok";
    case Status::compile_error: return "compile_error";
    case Status::run_error: return "run_error";
    case Status::timeout: return "timeout";
  }
  return "?";
}

Status parse_status(std::string_view text) {
  if (text == "ok") return Status::ok;
  if (text == "compile_error") return Status::compile_error;
  if (text == "run_error") return Status::run_error;
  if (text == "timeout") return Status::timeout;
  throw ParseError("unknown status '" + std::string(text) + "'");
}

}  // namespace flagtune
