#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace swaporder {

/// Probability mass function of an entanglement count on {0, ..., support}.
class Pmf {
 public:
  /// Validates that every entry lies in [0, 1] and the entries sum to 1
  /// within 1e-9. Throws std::invalid_argument otherwise.
  explicit Pmf(std::vector<double> probs);

  static Pmf point_mass(std::int64_t k);

  std::int64_t support() const noexcept {
    return static_cast<std::int64_t>(probs_.size()) - 1;
  }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::int64_t k) const noexcept {
    return probs_[static_cast<std::size_t>(k)];
  }

  double total() const noexcept;
  double mean() const noexcept;
  double variance() const noexcept;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  std::vector<double> probs_;
};

struct BinomialParams {
  std::int64_t trials = 0;
  double success = 0.0;

  friend bool operator==(const BinomialParams&, const BinomialParams&) = default;
};

struct NormalParams {
  double mean = 0.0;
  double variance = 0.0;

  friend bool operator==(const NormalParams&, const NormalParams&) = default;
};

/// Standard normal density and distribution function.
double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;

/// Exact Binomial(trials, success) pmf. Stable for any trial count: the
/// mode term is anchored in log space and the rest follow by ratio.
Pmf binomial_pmf(BinomialParams params);

/// Truncates `pmf` at the smallest K whose cumulative mass reaches
/// 1 - epsilon and moves all mass above K onto K. The result is a stochastic
/// lower bound of the input. Requires 0 < epsilon < 1.
Pmf approx_tail(const Pmf& pmf, double epsilon);

/// Smallest K >= trials * success whose Hoeffding tail bound
/// exp(-2 C (K/C - p)^2) is at most epsilon; `trials` if none qualifies.
std::int64_t hoeffding_support(std::int64_t trials, double success, double epsilon);

NormalParams b2n(BinomialParams params);

/// Moment-matched binomial. Throws InvalidMoments unless mean > variance >= 0.
BinomialParams n2b(NormalParams normal);

/// Mean and variance of min(X1, X2) for a bivariate normal with correlation
/// `rho`. Point masses (theta == 0, both variances zero) yield
/// (min(mu1, mu2), 0); any other theta == 0 case throws DegenerateTheta.
NormalParams min_normal_moments(NormalParams a, NormalParams b, double rho = 0.0);

/// C > 9 max{(1-p)/p, p/(1-p)}; false for p in {0, 1}.
bool satisfies_three_sigma(BinomialParams params) noexcept;

}  // namespace swaporder
