#include "swaporder/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace swaporder {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kBlockSize = 4096;

std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Welford accumulator; blocks are merged in index order.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) noexcept {
    if (other.count == 0) {
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }
};

std::int64_t draw_binomial(std::int64_t n, double p, CounterRng& rng) {
  if (n <= 0 || p <= 0.0) {
    return 0;
  }
  if (p >= 1.0) {
    return n;
  }
  std::binomial_distribution<std::int64_t> dist(n, p);
  return dist(rng);
}

// One slot: link draws, then swaps along `order`. Returns the E2E count.
std::int64_t run_trial(const PathSpec& path, const std::vector<int>& order, CounterRng& rng,
                       std::vector<std::int64_t>& count, std::vector<int>& prev,
                       std::vector<int>& next) {
  const int n = path.link_count();
  for (int x = 0; x < n; ++x) {
    const auto& link = path.link(x);
    count[static_cast<std::size_t>(x)] = draw_binomial(link.capacity, link.success, rng);
  }
  for (int x = 0; x <= n; ++x) {
    prev[static_cast<std::size_t>(x)] = x - 1;
    next[static_cast<std::size_t>(x)] = x + 1;
  }
  for (int s : order) {
    const auto si = static_cast<std::size_t>(s);
    const auto l = static_cast<std::size_t>(prev[si]);
    const int r = next[si];
    const std::int64_t attempts = std::min(count[l], count[si]);
    count[l] = draw_binomial(attempts, path.swap_prob(s), rng);
    next[l] = r;
    prev[static_cast<std::size_t>(r)] = static_cast<int>(l);
  }
  return count[0];
}

template <typename OrderForTrial>
SlotOutcome simulate(const PathSpec& path, std::uint64_t trials, std::uint64_t seed,
                     const SimulationOptions& options, OrderForTrial order_for_trial) {
  if (trials < 1) {
    throw std::invalid_argument("simulate: trials must be >= 1");
  }
  const std::uint64_t blocks = (trials + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> block_moments(static_cast<std::size_t>(blocks));
  const unsigned jobs =
      std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(options.jobs, blocks)));

  const auto work = [&](unsigned worker) {
    const auto size = static_cast<std::size_t>(path.link_count()) + 1;
    std::vector<std::int64_t> count(size);
    std::vector<int> prev(size);
    std::vector<int> next(size);
    std::vector<int> order;
    for (std::uint64_t b = worker; b < blocks; b += jobs) {
      Moments& acc = block_moments[static_cast<std::size_t>(b)];
      const std::uint64_t end = std::min(trials, (b + 1) * kBlockSize);
      for (std::uint64_t t = b * kBlockSize; t < end; ++t) {
        CounterRng rng(seed, t);
        order_for_trial(rng, order);
        acc.add(static_cast<double>(run_trial(path, order, rng, count, prev, next)));
      }
    }
  };

  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < jobs; ++w) {
        threads.emplace_back([&, w] {
          try {
            work(w);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& error : errors) {
      if (error) {
        std::rethrow_exception(error);
      }
    }
  }

  Moments total;
  for (const auto& block : block_moments) {
    total.merge(block);
  }
  SlotOutcome outcome;
  outcome.mean = total.mean;
  outcome.variance = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  outcome.trials = total.count;
  outcome.seed = seed;
  return outcome;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : state_(mix(seed + kGolden) ^ mix(stream_id * kGolden + 0xD1B54A32D192ED03ULL)) {}

CounterRng::result_type CounterRng::operator()() noexcept {
  state_ += kGolden;
  return mix(state_);
}

double SlotOutcome::standard_error() const noexcept {
  return trials > 0 ? std::sqrt(variance / static_cast<double>(trials)) : 0.0;
}

SlotOutcome simulate_order(const PathSpec& path, const SwapOrder& order, std::uint64_t trials,
                           std::uint64_t seed, const SimulationOptions& options) {
  order.validate(path);
  return simulate(path, trials, seed, options,
                  [&](CounterRng&, std::vector<int>& out) { out = order.sequence; });
}

SlotOutcome simulate_asap(const PathSpec& path, std::uint64_t trials, std::uint64_t seed,
                          const SimulationOptions& options) {
  std::vector<int> interior(static_cast<std::size_t>(path.interior_count()));
  std::iota(interior.begin(), interior.end(), 1);
  return simulate(path, trials, seed, options, [&](CounterRng& rng, std::vector<int>& out) {
    out = interior;
    // Fisher-Yates with an explicit index draw; std::shuffle is unspecified.
    for (std::size_t i = out.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(out[i - 1], out[j]);
    }
  });
}

}  // namespace swaporder
