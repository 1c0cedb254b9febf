#include "swaporder/estimator.hpp"

#include "swaporder/errors.hpp"
#include "swaporder/order_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swaporder {

void PhysicalLink::validate() const {
  if (!(length_km > 0.0)) {
    throw std::invalid_argument("PhysicalLink: length_km must be positive");
  }
  if (memory_pairs < 1) {
    throw std::invalid_argument("PhysicalLink: memory_pairs must be >= 1");
  }
  if (attempt_rate_per_s && !(*attempt_rate_per_s > 0.0)) {
    throw std::invalid_argument("PhysicalLink: attempt_rate must be positive");
  }
  if (success_per_attempt && !(*success_per_attempt > 0.0 && *success_per_attempt <= 1.0)) {
    throw std::invalid_argument("PhysicalLink: success_per_attempt must lie in (0, 1]");
  }
}

void HardwareProfile::validate() const {
  for (double v : {attenuation_db_per_km, light_speed_km_per_s, detector_efficiency,
                   memory_efficiency, attempt_latency_factor, protocol_prefactor}) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("HardwareProfile: every parameter must be positive");
    }
  }
  if (detector_efficiency > 1.0 || memory_efficiency > 1.0) {
    throw std::invalid_argument("HardwareProfile: efficiencies must be <= 1");
  }
}

void TimingParams::validate() const {
  if (coherence_time_s < 0.0 || herald_delay_s < 0.0 || app_delay_s < 0.0) {
    throw std::invalid_argument("TimingParams: times must be nonnegative");
  }
  if (!(cutoff() > 0.0)) {
    throw SlotNonpositive("TimingParams: coherence time does not exceed herald + app delays");
  }
}

LinkRates link_rates(const PhysicalLink& link, const HardwareProfile& hw) {
  link.validate();
  LinkRates rates;
  rates.attempts_per_s =
      link.attempt_rate_per_s.value_or(static_cast<double>(link.memory_pairs) *
                                       hw.light_speed_km_per_s /
                                       (hw.attempt_latency_factor * link.length_km));
  if (link.success_per_attempt) {
    rates.success_prob = *link.success_per_attempt;
  } else {
    const double efficiency = hw.detector_efficiency * hw.memory_efficiency;
    const double transmission = std::pow(10.0, -hw.attenuation_db_per_km * link.length_km / 10.0);
    rates.success_prob = hw.protocol_prefactor * efficiency * efficiency * transmission;
  }
  return rates;
}

double expected_wait_both(double rate1, double rate2) {
  if (!(rate1 > 0.0 && rate2 > 0.0)) {
    throw std::invalid_argument("expected_wait_both: rates must be positive");
  }
  return 1.0 / rate1 + 1.0 / rate2 - 1.0 / (rate1 + rate2);
}

double select_time_slot(double rate1, double rate2, const TimingParams& timing) {
  timing.validate();
  return std::min(expected_wait_both(rate1, rate2), timing.cutoff());
}

double round_trip_time(double total_length_km, double light_speed_km_per_s) {
  return 2.0 * total_length_km / light_speed_km_per_s;
}

ThroughputEstimate estimate_path_throughput(const std::vector<PhysicalLink>& links,
                                            const std::vector<double>& swap_probs,
                                            const HardwareProfile& hw,
                                            const TimingParams& timing, EvalMode mode) {
  if (links.empty()) {
    throw std::invalid_argument("estimate_path_throughput: no links");
  }
  hw.validate();
  timing.validate();

  std::vector<LinkRates> rates;
  rates.reserve(links.size());
  for (const auto& link : links) {
    rates.push_back(link_rates(link, hw));
  }

  double slot = timing.cutoff();
  if (links.size() == 2) {
    slot = select_time_slot(rates[0].attempts_per_s * rates[0].success_prob,
                            rates[1].attempts_per_s * rates[1].success_prob, timing);
  } else if (links.size() > 2) {
    const double total_km = std::accumulate(
        links.begin(), links.end(), 0.0,
        [](double acc, const PhysicalLink& link) { return acc + link.length_km; });
    slot = timing.coherence_time_s - round_trip_time(total_km, hw.light_speed_km_per_s);
  }
  if (!(slot > 0.0)) {
    throw SlotNonpositive("time slot " + std::to_string(slot) +
                          " s is not positive for this coherence time and path length");
  }

  std::vector<std::string> warnings;
  std::vector<LinkSpec> specs;
  specs.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto capacity = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(rates[i].attempts_per_s * slot)));
    if (capacity <= 5) {
      warnings.push_back("link " + std::to_string(i) + " capacity " + std::to_string(capacity) +
                         " is small; rounding error may be significant");
    }
    specs.push_back({capacity, rates[i].success_prob});
  }
  PathSpec path(std::move(specs), swap_probs);

  ThroughputEstimate estimate{0.0, slot, 0.0, path, SwapOrder{}, std::move(warnings)};
  if (links.size() == 1) {
    estimate.ent_per_s = rates[0].attempts_per_s * rates[0].success_prob;
    estimate.score = estimate.ent_per_s * slot;
    return estimate;
  }
  ScoredOrder best = vora_swap(path, mode);
  estimate.score = best.score;
  estimate.order = std::move(best.order);
  estimate.ent_per_s = best.score / (slot + timing.herald_delay_s + timing.app_delay_s);
  return estimate;
}

}  // namespace swaporder
