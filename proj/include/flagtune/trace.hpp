#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flagtune/flagspace.hpp"
#include "flagtune/measurement.hpp"

namespace flagtune {

/// One tested configuration. Measurements are kept in evaluation order and may cover
/// only part of the suite when evaluation was cut short.
struct TraceRecord {
  std::size_t sequence = 0;
  Configuration config;
  std::vector<std::pair<std::string, Measurement>> measurements;
  std::string annotation;

  const Measurement* find(std::string_view benchmark) const;
};

/// Ordered log of every configuration a campaign tested. Sequence numbers run 1, 2, ...
struct CampaignTrace {
  std::string method;    // "ric", "ce", "suite-ce", ...
  std::string campaign;  // benchmark or suite label
  std::vector<TraceRecord> records;

  TraceRecord& append(Configuration config, std::string annotation);
  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  /// Names of every benchmark measured anywhere in the trace, first-seen order.
  std::vector<std::string> benchmarks() const;
};

/// Tab-separated, one line per (record, benchmark):
///   sequence, config bitstring, base level, benchmark, time, status, annotation
/// preceded by a `# method=... campaign=...` line and a column header.
/// Digests are not part of the format.
void write_trace(std::ostream& out, const CampaignTrace& trace);
std::string format_trace(const CampaignTrace& trace);
CampaignTrace read_trace(std::istream& in);
CampaignTrace load_trace(const std::filesystem::path& path);

}  // namespace flagtune
