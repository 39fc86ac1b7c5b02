#include "flagtune/flagspace.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "flagtune/error.hpp"
#include "flagtune/io.hpp"

namespace flagtune {

using json = nlohmann::ordered_json;

FlagSpace::FlagSpace(std::vector<FlagDescriptor> flags, std::vector<BaseLevel> base_levels,
                     std::string default_baseline)
    : flags_(std::move(flags)),
      base_levels_(std::move(base_levels)),
      default_baseline_(std::move(default_baseline)) {
  std::set<std::string_view> seen;
  for (const auto& f : flags_) {
    if (f.name.empty()) throw ParseError("flag with empty name");
    if (f.on.empty() || f.off.empty())
      throw ParseError("flag '" + f.name + "' needs both enabled and disabled forms");
    if (!seen.insert(f.name).second) throw ParseError("duplicate flag '" + f.name + "'");
  }
  if (base_levels_.empty()) throw ParseError("no base levels");
  std::set<std::string_view> levels;
  for (const auto& l : base_levels_) {
    if (l.name.empty() || l.arg.empty()) throw ParseError("base level with empty name");
    if (!levels.insert(l.name).second) throw ParseError("duplicate base level '" + l.name + "'");
  }
  if (!level_index(default_baseline_))
    throw ParseError("default_baseline '" + default_baseline_ + "' is not a base level");
}

std::optional<std::size_t> FlagSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < flags_.size(); ++i)
    if (flags_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> FlagSpace::level_index(std::string_view name) const {
  for (std::size_t i = 0; i < base_levels_.size(); ++i)
    if (base_levels_[i].name == name) return i;
  return std::nullopt;
}

Configuration Configuration::from_bitstring(std::string base_level, std::string_view bits) {
  std::vector<FlagState> assignment;
  assignment.reserve(bits.size());
  for (char c : bits) {
    if (c == '1')
      assignment.push_back(FlagState::enabled);
    else if (c == '0')
      assignment.push_back(FlagState::disabled);
    else
      throw ParseError("bad bitstring '" + std::string(bits) + "'");
  }
  return Configuration(std::move(base_level), std::move(assignment));
}

std::string Configuration::bitstring() const {
  std::string bits;
  bits.reserve(assignment_.size());
  for (auto s : assignment_) bits.push_back(s == FlagState::enabled ? '1' : '0');
  return bits;
}

std::string Configuration::key() const { return base_level_ + ":" + bitstring(); }

void validate(const FlagSpace& space, const Configuration& config) {
  if (config.size() != space.size())
    throw StructuralError("configuration has " + std::to_string(config.size()) +
                          " flags, space has " + std::to_string(space.size()));
  if (!space.level_index(config.base_level()))
    throw StructuralError("unknown base level '" + config.base_level() + "'");
}

std::vector<std::string> render_args(const FlagSpace& space, const Configuration& config) {
  validate(space, config);
  std::vector<std::string> args;
  args.reserve(space.size() + 1);
  args.push_back(space.base_levels()[*space.level_index(config.base_level())].arg);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& f = space.flag(i);
    args.push_back(config.enabled(i) ? f.on : f.off);
  }
  return args;
}

std::string render_command_line(const FlagSpace& space, const Configuration& config) {
  std::string line;
  for (const auto& a : render_args(space, config)) {
    if (!line.empty()) line.push_back(' ');
    line += a;
  }
  return line;
}

Configuration toggle(const Configuration& config, std::size_t index) {
  if (index >= config.size())
    throw std::out_of_range("flag index " + std::to_string(index) + " out of range");
  auto assignment = config.assignment();
  assignment[index] = flipped(assignment[index]);
  return Configuration(config.base_level(), std::move(assignment));
}

Configuration with_flag(const Configuration& config, std::size_t index, FlagState state) {
  if (index >= config.size())
    throw std::out_of_range("flag index " + std::to_string(index) + " out of range");
  auto assignment = config.assignment();
  assignment[index] = state;
  return Configuration(config.base_level(), std::move(assignment));
}

Configuration all_enabled(const FlagSpace& space, std::string base_level) {
  Configuration c(std::move(base_level), std::vector<FlagState>(space.size(), FlagState::enabled));
  validate(space, c);
  return c;
}

Configuration all_enabled(const FlagSpace& space) {
  return all_enabled(space, space.default_baseline());
}

Configuration stock_baseline(const FlagSpace& space) {
  std::vector<FlagState> assignment;
  assignment.reserve(space.size());
  for (const auto& f : space.flags())
    assignment.push_back(f.in_default ? FlagState::enabled : FlagState::disabled);
  return Configuration(space.default_baseline(), std::move(assignment));
}

FlagSpace parse_flag_space(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("flag space: ") + e.what());
  }
  try {
    std::vector<BaseLevel> levels;
    for (const auto& l : doc.at("base_levels")) {
      if (l.is_string()) {
        auto name = l.get<std::string>();
        levels.push_back({name, "-" + name});
      } else {
        levels.push_back({l.at("name").get<std::string>(), l.at("arg").get<std::string>()});
      }
    }
    std::vector<FlagDescriptor> flags;
    if (doc.contains("flags")) {
      for (const auto& f : doc.at("flags")) {
        flags.push_back({f.at("name").get<std::string>(), f.at("on").get<std::string>(),
                         f.at("off").get<std::string>(), f.value("in_default", true)});
      }
    }
    return FlagSpace(std::move(flags), std::move(levels),
                     doc.at("default_baseline").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("flag space: ") + e.what());
  }
}

FlagSpace load_flag_space(const std::filesystem::path& path) {
  return parse_flag_space(read_text_file(path));
}

std::string serialize_flag_space(const FlagSpace& space) {
  json doc;
  doc["base_levels"] = json::array();
  for (const auto& l : space.base_levels())
    doc["base_levels"].push_back(json{{"name", l.name}, {"arg", l.arg}});
  doc["default_baseline"] = space.default_baseline();
  doc["flags"] = json::array();
  for (const auto& f : space.flags())
    doc["flags"].push_back(
        json{{"name", f.name}, {"on", f.on}, {"off", f.off}, {"in_default", f.in_default}});
  return doc.dump(2) + "\n";
}

}  // namespace flagtune
