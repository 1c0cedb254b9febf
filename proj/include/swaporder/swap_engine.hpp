#pragma once

#include "swaporder/distributions.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace swaporder {

struct LinkSpec {
  std::int64_t capacity = 1;
  double success = 0.0;

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

/// A repeater path with nodes 0..n: n links and n-1 interior swap nodes.
/// swap_probs[i - 1] is the swap success probability of interior node i.
class PathSpec {
 public:
  PathSpec(std::vector<LinkSpec> links, std::vector<double> swap_probs);

  int node_count() const noexcept { return static_cast<int>(links_.size()) + 1; }
  int link_count() const noexcept { return static_cast<int>(links_.size()); }
  int interior_count() const noexcept { return static_cast<int>(links_.size()) - 1; }

  const std::vector<LinkSpec>& links() const noexcept { return links_; }
  const std::vector<double>& swap_probs() const noexcept { return swap_probs_; }

  /// Link (i, i+1).
  const LinkSpec& link(int i) const { return links_.at(static_cast<std::size_t>(i)); }
  /// Swap probability of interior node `node` (1-based).
  double swap_prob(int node) const { return swap_probs_.at(static_cast<std::size_t>(node - 1)); }

  /// Path reversed left to right; node i maps to n - i.
  PathSpec mirrored() const;

  friend bool operator==(const PathSpec&, const PathSpec&) = default;

 private:
  std::vector<LinkSpec> links_;
  std::vector<double> swap_probs_;
};

/// Sequence of interior node ids in the order they swap.
struct SwapOrder {
  std::vector<int> sequence;

  /// Throws InvalidOrder unless `sequence` permutes 1..path.interior_count().
  void validate(const PathSpec& path) const;
  std::string to_string() const;
  /// Parses "3,2,1" (brackets and spaces tolerated). Throws InvalidOrder.
  static SwapOrder parse(const std::string& text);

  friend bool operator==(const SwapOrder&, const SwapOrder&) = default;
  friend auto operator<=>(const SwapOrder&, const SwapOrder&) = default;
};

struct EvalMode {
  enum class Kind { exact, tail, normal, hybrid };

  Kind kind = Kind::exact;
  double epsilon = 1e-5;

  static EvalMode exact() { return {Kind::exact, 0.0}; }
  static EvalMode tail(double epsilon = 1e-5);
  static EvalMode normal() { return {Kind::normal, 0.0}; }
  static EvalMode hybrid(double epsilon = 1e-5);

  std::string name() const;
  /// Accepts "exact", "tail", "normal", "hybrid".
  static EvalMode parse(const std::string& name, double epsilon = 1e-5);
};

/// Running entanglement distribution of a (possibly virtual) link.
using Distribution = std::variant<Pmf, NormalParams>;

double expected_count(const Distribution& dist) noexcept;

struct SwapResult {
  double score = 0.0;
  Pmf out = Pmf::point_mass(0);
};

/// Exact distribution of the swap outcome B(min(L, R), q) for independent
/// L ~ left and R ~ right. out.support() == min(left.support(), right.support())
/// and score is its mean. The result is bitwise symmetric in (left, right).
SwapResult swap_exact(const Pmf& left, const Pmf& right, double q);

/// Normal surrogate of a swap: min-of-normals moments, moment-matched to a
/// binomial, thinned by q. Propagates InvalidMoments / DegenerateTheta.
NormalParams swap_normal(NormalParams left, NormalParams right, double q);

struct EntResult {
  double score = 0.0;
  Distribution dist = Pmf::point_mass(0);
};

struct SwapStep {
  double score = 0.0;
  Distribution dist = Pmf::point_mass(0);
  /// Hybrid mode fell back to the tail-truncated pmf route for this swap.
  bool used_fallback = false;
};

/// Evaluates swap orders on a fixed path under one mode. Link distributions
/// are built once (one per distinct (capacity, success) pair) and shared
/// read-only; evaluate() and swap() are const and safe to call concurrently.
class PathEvaluator {
 public:
  PathEvaluator(const PathSpec& path, EvalMode mode);

  const PathSpec& path() const noexcept { return path_; }
  const EvalMode& mode() const noexcept { return mode_; }
  const Distribution& link_distribution(int link) const {
    return links_.at(static_cast<std::size_t>(link));
  }

  /// One SWAP of two neighbouring distributions at a node with prob q.
  SwapStep swap(const Distribution& left, const Distribution& right, double q) const;

  /// Throws InvalidOrder.
  EntResult evaluate(const SwapOrder& order) const;

 private:
  PathSpec path_;
  EvalMode mode_;
  std::vector<Distribution> links_;
};

/// Expected end-to-end entanglements per slot of `order` (ENT).
EntResult ent(const PathSpec& path, const SwapOrder& order, EvalMode mode);

/// Width of the subpath x..y: the minimum link capacity between them.
std::int64_t subpath_capacity(const PathSpec& path, int x, int y);

}  // namespace swaporder
