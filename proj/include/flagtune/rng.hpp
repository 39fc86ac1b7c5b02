#pragma once

#include <cstdint>
#include <random>

namespace flagtune {

/// Engine for draw `stream` of a seeded campaign. std::seed_seq and std::mt19937_64 are
/// fully specified by the standard, so draws are identical across toolchains.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform integer in [0, n) by rejection; unlike std::uniform_int_distribution the
/// mapping is portable. Requires n > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace flagtune
