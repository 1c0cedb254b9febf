#pragma once

#include "swaporder/swap_engine.hpp"

#include <cstdint>
#include <limits>

namespace swaporder {

/// Counter-based generator: the stream for (seed, stream_id) is a pure
/// function of both, so trial i draws the same numbers on any thread.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

 private:
  std::uint64_t state_;
};

struct SlotOutcome {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased sample variance of the E2E count
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  double standard_error() const noexcept;
};

struct SimulationOptions {
  unsigned jobs = 1;
};

/// Samples link counts E_i ~ B(c_i, p_i) and applies the swaps of `order`,
/// each drawing B(min(left, right), q). Identical output for any job count.
SlotOutcome simulate_order(const PathSpec& path, const SwapOrder& order, std::uint64_t trials,
                           std::uint64_t seed, const SimulationOptions& options = {});

/// Slot-model stand-in for swap-asap: a fresh uniformly random interleaving
/// of the interior nodes per trial.
SlotOutcome simulate_asap(const PathSpec& path, std::uint64_t trials, std::uint64_t seed,
                          const SimulationOptions& options = {});

}  // namespace swaporder
