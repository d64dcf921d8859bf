#pragma once

#include <cstdint>

namespace sparsebound {

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent random streams derived from one user seed.
enum class Stream : std::uint64_t {
  Entries = 1,      // entries of sampled approximants X
  Rademacher = 2,   // sign vectors for Monte Carlo estimators
  MatrixSource = 3, // test matrices built by generators
};

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, trial, index), so draws can be taken in any order and on
/// any thread without changing the result.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, Stream stream) noexcept
      : key_(mix64(seed ^ mix64(static_cast<std::uint64_t>(stream) * 0xD6E8FEB86659FD93ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t trial, std::uint64_t index) const noexcept {
    return mix64(mix64(key_ ^ mix64(trial)) + index * 0xA0761D6478BD642FULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t trial, std::uint64_t index) const noexcept {
    return static_cast<double>(bits(trial, index) >> 11) * 0x1.0p-53;
  }

  constexpr int rademacher(std::uint64_t trial, std::uint64_t index) const noexcept {
    return (bits(trial, index) >> 63) != 0 ? 1 : -1;
  }

 private:
  std::uint64_t key_;
};

}  // namespace sparsebound
