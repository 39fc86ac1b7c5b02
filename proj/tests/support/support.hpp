#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "flagtune/flagspace.hpp"
#include "flagtune/synthetic.hpp"

namespace flagtune::testing {

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      path_ = base / ("flagtune-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++) + "-" +
                      std::to_string(i));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string slurp(const std::filesystem::path& path);

/// Flags "f0".."f<n-1>" rendered as -ff<i> / -fno-f<i>; levels O1, O2, O3 with O3 default.
FlagSpace make_space(std::size_t n, std::vector<bool> in_default = {});

/// Independent restatement of the synthetic cost formula, evaluated straight from the
/// model description. Tests use it to check the library's model and searches.
double reference_time(const FlagSpace& space, const BenchmarkModel& model, const Configuration& config);

struct ReferenceOptimum {
  Configuration config;
  double time;
};
/// Exhaustive minimum over all 2^n assignments at one base level.
ReferenceOptimum reference_optimum(const FlagSpace& space, const BenchmarkModel& model, const std::string& level);

/// Additive model: integer on-deltas in [-20, 20], integer base time, no pair terms.
BenchmarkModel random_additive(std::mt19937_64& rng, const FlagSpace& space);
/// On/off deltas plus a few pair terms, all integers; base time large enough to stay positive.
BenchmarkModel random_interacting(std::mt19937_64& rng, const FlagSpace& space);

/// Pair-dependency instance: base 100, each flag +5 when disabled alone, -20 when both are.
SyntheticModel pair_model(const FlagSpace& two_flag_space, const std::string& bench = "cover");

}  // namespace flagtune::testing
