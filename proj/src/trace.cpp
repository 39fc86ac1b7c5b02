#include "flagtune/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"

namespace flagtune {

const Measurement* TraceRecord::find(std::string_view benchmark) const {
  for (const auto& [name, m] : measurements)
    if (name == benchmark) return &m;
  return nullptr;
}

TraceRecord& CampaignTrace::append(Configuration config, std::string annotation) {
  TraceRecord r;
  r.sequence = records.size() + 1;
  r.config = std::move(config);
  r.annotation = std::move(annotation);
  records.push_back(std::move(r));
  return records.back();
}

std::vector<std::string> CampaignTrace::benchmarks() const {
  std::vector<std::string> out;
  for (const auto& r : records)
    for (const auto& [name, m] : r.measurements)
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  return out;
}

namespace {
constexpr std::string_view kColumns = "sequence\tbitstring\tbase_level\tbenchmark\ttime\tstatus\tannotation";
}

void write_trace(std::ostream& out, const CampaignTrace& trace) {
  out << "# method=" << trace.method << " campaign=" << trace.campaign << '\n';
  out << kColumns << '\n';
  for (const auto& r : trace.records) {
    const auto bits = r.config.bitstring();
    for (const auto& [bench, m] : r.measurements) {
      out << r.sequence << '\t' << bits << '\t' << r.config.base_level() << '\t' << bench << '\t'
          << (m.time ? format_double(*m.time) : "-") << '\t' << to_string(m.status) << '\t'
          << r.annotation << '\n';
    }
  }
}

std::string format_trace(const CampaignTrace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

CampaignTrace read_trace(std::istream& in) {
  CampaignTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (const auto& tok : split(std::string_view(line).substr(1), ' ')) {
        if (tok.starts_with("method=")) trace.method = tok.substr(7);
        if (tok.starts_with("campaign=")) trace.campaign = tok.substr(9);
      }
      continue;
    }
    if (line == kColumns) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 7) throw ParseError("trace line " + std::to_string(lineno) + ": expected 7 fields");
    std::size_t seq = 0;
    auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), seq);
    if (ec != std::errc() || seq == 0) throw ParseError("trace line " + std::to_string(lineno) + ": bad sequence");

    Measurement m;
    m.status = parse_status(fields[5]);
    if (fields[4] != "-") {
      double t = 0;
      auto [tp, tec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), t);
      if (tec != std::errc()) throw ParseError("trace line " + std::to_string(lineno) + ": bad time");
      m.time = t;
    }
    if (m.ok() != m.time.has_value())
      throw ParseError("trace line " + std::to_string(lineno) + ": time present iff status ok");

    if (trace.records.empty() || trace.records.back().sequence != seq) {
      if (seq != trace.records.size() + 1)
        throw ParseError("trace line " + std::to_string(lineno) + ": sequence numbers must be contiguous");
      trace.append(Configuration::from_bitstring(fields[2], fields[1]), fields[6]);
    }
    trace.records.back().measurements.emplace_back(fields[3], std::move(m));
  }
  return trace;
}

CampaignTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace " + path.string());
  return read_trace(in);
}

}  // namespace flagtune
