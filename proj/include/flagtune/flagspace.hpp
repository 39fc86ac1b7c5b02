#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flagtune {

enum class FlagState : std::uint8_t { disabled = 0, enabled = 1 };

constexpr FlagState flipped(FlagState s) noexcept {
  return s == FlagState::enabled ? FlagState::disabled : FlagState::enabled;
}

struct FlagDescriptor {
  std::string name;  // canonical, e.g. "tree-loop-if-convert"
  std::string on;    // e.g. "-ftree-loop-if-convert"
  std::string off;   // e.g. "-fno-tree-loop-if-convert"
  // Whether the stock default level turns this flag on.
  bool in_default = true;

  friend bool operator==(const FlagDescriptor&, const FlagDescriptor&) = default;
};

struct BaseLevel {
  std::string name;  // "O3"
  std::string arg;   // "-O3"

  friend bool operator==(const BaseLevel&, const BaseLevel&) = default;
};

/// The ordered universe of toggleable flags plus the allowed base levels.
/// Flag order is authoritative: lower index wins every downstream tie.
class FlagSpace {
 public:
  FlagSpace(std::vector<FlagDescriptor> flags, std::vector<BaseLevel> base_levels,
            std::string default_baseline);

  std::size_t size() const noexcept { return flags_.size(); }
  bool empty() const noexcept { return flags_.empty(); }

  const std::vector<FlagDescriptor>& flags() const noexcept { return flags_; }
  const FlagDescriptor& flag(std::size_t index) const { return flags_.at(index); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  const std::vector<BaseLevel>& base_levels() const noexcept { return base_levels_; }
  const std::string& default_baseline() const noexcept { return default_baseline_; }
  std::optional<std::size_t> level_index(std::string_view name) const;

  friend bool operator==(const FlagSpace&, const FlagSpace&) = default;

 private:
  std::vector<FlagDescriptor> flags_;
  std::vector<BaseLevel> base_levels_;
  std::string default_baseline_;
};

/// One base level plus an explicit on/off state for every flag of a space.
class Configuration {
 public:
  Configuration() = default;
  Configuration(std::string base_level, std::vector<FlagState> assignment)
      : base_level_(std::move(base_level)), assignment_(std::move(assignment)) {}

  /// bits[i] == '1' means flag i enabled.
  static Configuration from_bitstring(std::string base_level, std::string_view bits);

  const std::string& base_level() const noexcept { return base_level_; }
  const std::vector<FlagState>& assignment() const noexcept { return assignment_; }
  std::size_t size() const noexcept { return assignment_.size(); }
  FlagState state(std::size_t index) const { return assignment_.at(index); }
  bool enabled(std::size_t index) const { return state(index) == FlagState::enabled; }

  std::string bitstring() const;
  /// "<base_level>:<bitstring>", unique per configuration.
  std::string key() const;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::string base_level_;
  std::vector<FlagState> assignment_;
};

/// Throws StructuralError unless `config` belongs to `space`.
void validate(const FlagSpace& space, const Configuration& config);

std::vector<std::string> render_args(const FlagSpace& space, const Configuration& config);
std::string render_command_line(const FlagSpace& space, const Configuration& config);

/// Copy of `config` with flag `index` flipped. Throws std::out_of_range.
Configuration toggle(const Configuration& config, std::size_t index);

/// Copy of `config` with flag `index` set to `state`. Throws std::out_of_range.
Configuration with_flag(const Configuration& config, std::size_t index, FlagState state);

Configuration all_enabled(const FlagSpace& space, std::string base_level);
Configuration all_enabled(const FlagSpace& space);
/// The default level with every flag set the way the default level sets it.
Configuration stock_baseline(const FlagSpace& space);

FlagSpace parse_flag_space(std::string_view document);
FlagSpace load_flag_space(const std::filesystem::path& path);
std::string serialize_flag_space(const FlagSpace& space);

}  // namespace flagtune
