#include "swaporder/distributions.hpp"

#include "swaporder/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace swaporder {

namespace {

constexpr double kSumTolerance = 1e-9;

}  // namespace

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("Pmf: empty probability vector");
  }
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("Pmf: entry outside [0, 1]: " + std::to_string(p));
    }
  }
  if (std::abs(total() - 1.0) > kSumTolerance) {
    throw std::invalid_argument("Pmf: entries sum to " + std::to_string(total()));
  }
}

Pmf Pmf::point_mass(std::int64_t k) {
  if (k < 0) {
    throw std::invalid_argument("Pmf::point_mass: negative support");
  }
  std::vector<double> probs(static_cast<std::size_t>(k) + 1, 0.0);
  probs.back() = 1.0;
  return Pmf(std::move(probs));
}

double Pmf::total() const noexcept {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double Pmf::mean() const noexcept {
  double m = 0.0;
  for (std::size_t k = 1; k < probs_.size(); ++k) {
    m += static_cast<double>(k) * probs_[k];
  }
  return m;
}

double Pmf::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const double d = static_cast<double>(k) - m;
    v += d * d * probs_[k];
  }
  return v;
}

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

Pmf binomial_pmf(BinomialParams params) {
  const auto n = params.trials;
  const double p = params.success;
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial_pmf: invalid parameters");
  }
  std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
  if (n == 0 || p == 0.0) {
    probs.front() = 1.0;
    return Pmf(std::move(probs));
  }
  if (p == 1.0) {
    probs.back() = 1.0;
    return Pmf(std::move(probs));
  }

  const auto mode = std::min<std::int64_t>(
      n, static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * p)));
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(mode);
  const double log_mode = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                          std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
                          (nd - kd) * std::log1p(-p);
  const double odds = p / (1.0 - p);

  probs[static_cast<std::size_t>(mode)] = std::exp(log_mode);
  for (std::int64_t k = mode; k < n; ++k) {
    probs[static_cast<std::size_t>(k + 1)] = probs[static_cast<std::size_t>(k)] *
                                             static_cast<double>(n - k) /
                                             static_cast<double>(k + 1) * odds;
  }
  for (std::int64_t k = mode; k > 0; --k) {
    probs[static_cast<std::size_t>(k - 1)] = probs[static_cast<std::size_t>(k)] *
                                             static_cast<double>(k) /
                                             static_cast<double>(n - k + 1) / odds;
  }

  // lgamma carries ~1e-13 relative error; renormalize.
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& v : probs) {
    v /= sum;
  }
  return Pmf(std::move(probs));
}

Pmf approx_tail(const Pmf& pmf, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("approx_tail: epsilon must lie in (0, 1)");
  }
  const auto probs = pmf.probs();
  const double target = 1.0 - epsilon;
  std::size_t cut = probs.size() - 1;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cumulative += probs[k];
    if (cumulative >= target) {
      cut = k;
      break;
    }
  }
  if (cut == probs.size() - 1) {
    return pmf;
  }
  double tail = 0.0;
  for (std::size_t k = probs.size() - 1; k > cut; --k) {
    tail += probs[k];
  }
  std::vector<double> out(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  out[cut] = std::min(1.0, out[cut] + tail);
  return Pmf(std::move(out));
}

std::int64_t hoeffding_support(std::int64_t trials, double success, double epsilon) {
  if (trials < 1) {
    throw std::invalid_argument("hoeffding_support: trials must be >= 1");
  }
  if (!(epsilon > 0.0) || success >= 1.0 || epsilon >= 1.0) {
    return trials;
  }
  const double c = static_cast<double>(trials);
  const auto bound = [&](std::int64_t k) {
    const double gap = static_cast<double>(k) / c - success;
    return std::exp(-2.0 * c * gap * gap);
  };
  // Closed form of the bound inversion, then nudge for rounding.
  const double exact = c * success + std::sqrt(c * std::log(1.0 / epsilon) / 2.0);
  auto k = static_cast<std::int64_t>(std::ceil(exact));
  const auto lowest = static_cast<std::int64_t>(std::ceil(c * success));
  k = std::max(k, lowest);
  while (k > lowest && bound(k - 1) <= epsilon) {
    --k;
  }
  while (k <= trials && bound(k) > epsilon) {
    ++k;
  }
  return std::min(k, trials);
}

NormalParams b2n(BinomialParams params) {
  const double c = static_cast<double>(params.trials);
  const double p = params.success;
  return {c * p, c * p * (1.0 - p)};
}

BinomialParams n2b(NormalParams normal) {
  const double mu = normal.mean;
  const double var = normal.variance;
  if (!(mu > 0.0) || !(var >= 0.0) || !(mu > var)) {
    throw InvalidMoments("n2b: moments not binomial (mean=" + std::to_string(mu) +
                         ", variance=" + std::to_string(var) + ")");
  }
  return {static_cast<std::int64_t>(std::llround(mu * mu / (mu - var))), 1.0 - var / mu};
}

NormalParams min_normal_moments(NormalParams a, NormalParams b, double rho) {
  if (a.variance < 0.0 || b.variance < 0.0 || !(rho >= -1.0 && rho <= 1.0)) {
    throw std::invalid_argument("min_normal_moments: invalid parameters");
  }
  const double s1 = std::sqrt(a.variance);
  const double s2 = std::sqrt(b.variance);
  const double theta_sq = a.variance + b.variance - 2.0 * rho * (s1 * s2);
  const double theta = std::sqrt(std::max(0.0, theta_sq));
  if (theta == 0.0) {
    if (a.variance == 0.0 && b.variance == 0.0) {
      return {std::min(a.mean, b.mean), 0.0};
    }
    throw DegenerateTheta("min_normal_moments: theta = 0 for non point-mass operands");
  }

  // Moments are taken about the smaller mean; the variance is shift invariant
  // and this keeps E[Y^2] - E[Y]^2 from cancelling at large counts.
  const double shift = std::min(a.mean, b.mean);
  const double mu1 = a.mean - shift;
  const double mu2 = b.mean - shift;
  const double delta = (mu2 - mu1) / theta;
  const double cdf_pos = normal_cdf(delta);
  const double cdf_neg = normal_cdf(-delta);
  const double density = theta * normal_pdf(delta);

  const double first = (mu1 * cdf_pos + mu2 * cdf_neg) - density;
  const double second = ((a.variance + mu1 * mu1) * cdf_pos + (b.variance + mu2 * mu2) * cdf_neg) -
                        (mu1 + mu2) * density;
  return {shift + first, std::max(0.0, second - first * first)};
}

bool satisfies_three_sigma(BinomialParams params) noexcept {
  const double p = params.success;
  if (!(p > 0.0 && p < 1.0)) {
    return false;
  }
  return static_cast<double>(params.trials) > 9.0 * std::max((1.0 - p) / p, p / (1.0 - p));
}

}  // namespace swaporder
