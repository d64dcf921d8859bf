#pragma once

// Internal: exhaustive walk over binary assignments in Gray-code order.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "sparsebound/parallel.hpp"

namespace sparsebound::detail {

// Low bits walked incrementally inside one block. Each block restarts from a
// freshly computed state, which bounds floating-point drift to 2^12 updates.
inline constexpr std::size_t kGrayLowBits = 12;

// Maximises State::value() over all 2^free_bits assignments. `make_state()`
// builds a per-worker State exposing
//   void reset(std::uint64_t assignment);  // bit b set => variable b flipped
//   void flip(std::size_t bit);
//   double value() const;
// Blocks fix the high bits and are distributed over worker threads; the
// max-reduce is exact so the result does not depend on the thread count.
template <class MakeState>
double gray_max(std::size_t free_bits, MakeState make_state) {
  const std::size_t low = std::min(free_bits, kGrayLowBits);
  const std::size_t high = free_bits - low;
  const std::uint64_t blocks = std::uint64_t{1} << high;
  const std::uint64_t steps = std::uint64_t{1} << low;

  std::vector<double> block_max(blocks, -std::numeric_limits<double>::infinity());
  parallel_for(blocks, [&](std::size_t block) {
    auto state = make_state();
    state.reset(static_cast<std::uint64_t>(block) << low);
    double best = state.value();
    for (std::uint64_t i = 1; i < steps; ++i) {
      state.flip(static_cast<std::size_t>(std::countr_zero(i)));
      best = std::max(best, state.value());
    }
    block_max[block] = best;
  });
  return *std::max_element(block_max.begin(), block_max.end());
}

}  // namespace sparsebound::detail
