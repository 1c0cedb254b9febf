#pragma once

#include "swaporder/swap_engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swaporder {

struct PhysicalLink {
  double length_km = 1.0;
  std::int64_t memory_pairs = 1;
  /// Measured attempts per second; overrides the hardware model when set.
  std::optional<double> attempt_rate_per_s;
  /// Measured success probability per attempt; overrides the hardware model.
  std::optional<double> success_per_attempt;

  void validate() const;
  friend bool operator==(const PhysicalLink&, const PhysicalLink&) = default;
};

struct HardwareProfile {
  double attenuation_db_per_km = 0.2;
  double light_speed_km_per_s = 2e5;
  double detector_efficiency = 0.95;
  double memory_efficiency = 0.95;
  /// Link latencies spent per heralded attempt.
  double attempt_latency_factor = 3.5;
  double protocol_prefactor = 0.5;

  void validate() const;
  friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;
};

struct TimingParams {
  double coherence_time_s = 0.02;
  double herald_delay_s = 0.0;
  double app_delay_s = 0.0;

  void validate() const;
  /// T_cohere - tau_her - tau_app.
  double cutoff() const noexcept { return coherence_time_s - herald_delay_s - app_delay_s; }
  friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

struct LinkRates {
  double attempts_per_s = 0.0;
  double success_prob = 0.0;
};

LinkRates link_rates(const PhysicalLink& link, const HardwareProfile& hw);

/// E[max(T1, T2)] for independent exponential waits with the given rates.
double expected_wait_both(double rate1, double rate2);

/// Two-link slot: min(E[max(T1, T2)], cutoff). `rates` are entanglements/s.
double select_time_slot(double rate1, double rate2, const TimingParams& timing);

/// Round trip over the whole path, 2 L / c0.
double round_trip_time(double total_length_km, double light_speed_km_per_s);

struct ThroughputEstimate {
  double ent_per_s = 0.0;
  double slot_s = 0.0;
  double score = 0.0;  ///< expected end-to-end entanglements per slot
  PathSpec path;
  SwapOrder order;
  std::vector<std::string> warnings;
};

/// Maps physical links to a slot-model path and scores it with vora_swap.
/// Two links: slot from select_time_slot. More: T_cohere - round trip.
/// One link: the raw rate A r. Throws SlotNonpositive for a slot <= 0.
ThroughputEstimate estimate_path_throughput(const std::vector<PhysicalLink>& links,
                                            const std::vector<double>& swap_probs,
                                            const HardwareProfile& hw,
                                            const TimingParams& timing, EvalMode mode);

}  // namespace swaporder
