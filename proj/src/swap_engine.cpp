#include "swaporder/swap_engine.hpp"

#include "swaporder/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace swaporder {

PathSpec::PathSpec(std::vector<LinkSpec> links, std::vector<double> swap_probs)
    : links_(std::move(links)), swap_probs_(std::move(swap_probs)) {
  if (links_.empty()) {
    throw std::invalid_argument("PathSpec: a path needs at least one link");
  }
  if (swap_probs_.size() + 1 != links_.size()) {
    throw std::invalid_argument("PathSpec: expected " + std::to_string(links_.size() - 1) +
                                " swap probabilities, got " +
                                std::to_string(swap_probs_.size()));
  }
  for (const auto& link : links_) {
    if (link.capacity < 1) {
      throw std::invalid_argument("PathSpec: link capacity must be >= 1");
    }
    if (!(link.success >= 0.0 && link.success <= 1.0)) {
      throw std::invalid_argument("PathSpec: link success probability outside [0, 1]");
    }
  }
  for (double q : swap_probs_) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw std::invalid_argument("PathSpec: swap probability outside [0, 1]");
    }
  }
}

PathSpec PathSpec::mirrored() const {
  return PathSpec(std::vector<LinkSpec>(links_.rbegin(), links_.rend()),
                  std::vector<double>(swap_probs_.rbegin(), swap_probs_.rend()));
}

void SwapOrder::validate(const PathSpec& path) const {
  const int interior = path.interior_count();
  if (static_cast<int>(sequence.size()) != interior) {
    throw InvalidOrder("order " + to_string() + " has " + std::to_string(sequence.size()) +
                       " entries, path has " + std::to_string(interior) + " interior nodes");
  }
  std::vector<bool> seen(static_cast<std::size_t>(interior) + 1, false);
  for (int node : sequence) {
    if (node < 1 || node > interior || seen[static_cast<std::size_t>(node)]) {
      throw InvalidOrder("order " + to_string() + " is not a permutation of 1.." +
                         std::to_string(interior));
    }
    seen[static_cast<std::size_t>(node)] = true;
  }
}

std::string SwapOrder::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(sequence[i]);
  }
  return out + "]";
}

SwapOrder SwapOrder::parse(const std::string& text) {
  std::string cleaned;
  for (char c : text) {
    if (c != '[' && c != ']' && !std::isspace(static_cast<unsigned char>(c))) {
      cleaned += c;
    }
  }
  SwapOrder order;
  if (cleaned.empty()) {
    return order;
  }
  std::stringstream stream(cleaned);
  std::string token;
  while (std::getline(stream, token, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw InvalidOrder("cannot parse order '" + text + "'");
    }
    if (used != token.size()) {
      throw InvalidOrder("cannot parse order '" + text + "'");
    }
    order.sequence.push_back(value);
  }
  return order;
}

EvalMode EvalMode::tail(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("EvalMode: epsilon must lie in (0, 1)");
  }
  return {Kind::tail, epsilon};
}

EvalMode EvalMode::hybrid(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("EvalMode: epsilon must lie in (0, 1)");
  }
  return {Kind::hybrid, epsilon};
}

std::string EvalMode::name() const {
  switch (kind) {
    case Kind::exact:
      return "exact";
    case Kind::tail:
      return "tail";
    case Kind::normal:
      return "normal";
    case Kind::hybrid:
      return "hybrid";
  }
  return "unknown";
}

EvalMode EvalMode::parse(const std::string& name, double epsilon) {
  if (name == "exact") return exact();
  if (name == "tail") return tail(epsilon);
  if (name == "normal") return normal();
  if (name == "hybrid") return hybrid(epsilon);
  throw std::invalid_argument("unknown evaluation mode '" + name + "'");
}

double expected_count(const Distribution& dist) noexcept {
  if (const auto* pmf = std::get_if<Pmf>(&dist)) {
    return pmf->mean();
  }
  return std::get<NormalParams>(dist).mean;
}

SwapResult swap_exact(const Pmf& left, const Pmf& right, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("swap_exact: q outside [0, 1]");
  }
  const auto width = static_cast<std::size_t>(std::min(left.support(), right.support()));

  // Survival functions S(m) = P(X >= m) for m = 0..width+1.
  const auto survival = [width](std::span<const double> probs) {
    std::vector<double> s(width + 2, 0.0);
    double acc = 0.0;
    for (std::size_t k = probs.size(); k-- > 0;) {
      acc += probs[k];
      if (k <= width + 1) {
        s[k] = acc;
      }
    }
    return s;
  };
  const auto s_left = survival(left.probs());
  const auto s_right = survival(right.probs());

  // P(min = m) = P(min >= m) - P(min >= m+1); the products commute bitwise.
  std::vector<double> min_probs(width + 1);
  for (std::size_t m = 0; m <= width; ++m) {
    const double upper = s_left[m] * s_right[m];
    const double lower = s_left[m + 1] * s_right[m + 1];
    min_probs[m] = std::max(0.0, upper - lower);
  }

  // Thinning by q: coefficients of G(1 - q + q z) for the pgf G of the min,
  // by Horner's rule. Every term is nonnegative.
  const double keep = q;
  const double drop = 1.0 - q;
  std::vector<double> thinned(width + 1, 0.0);
  thinned[0] = min_probs[width];
  for (std::size_t m = width; m-- > 0;) {
    const std::size_t len = width - m;
    thinned[len] = keep * thinned[len - 1];
    for (std::size_t j = len - 1; j > 0; --j) {
      thinned[j] = drop * thinned[j] + keep * thinned[j - 1];
    }
    thinned[0] = drop * thinned[0] + min_probs[m];
  }

  double positive = 0.0;
  double score = 0.0;
  for (std::size_t k = 1; k <= width; ++k) {
    positive += thinned[k];
    score += static_cast<double>(k) * thinned[k];
  }
  thinned[0] = std::clamp(1.0 - positive, 0.0, 1.0);
  return {score, Pmf(std::move(thinned))};
}

NormalParams swap_normal(NormalParams left, NormalParams right, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("swap_normal: q outside [0, 1]");
  }
  const NormalParams minimum = min_normal_moments(left, right, 0.0);
  const BinomialParams matched = n2b(minimum);
  return b2n({matched.trials, q * matched.success});
}

namespace {

NormalParams moments_of(const Distribution& dist) {
  if (const auto* pmf = std::get_if<Pmf>(&dist)) {
    return {pmf->mean(), pmf->variance()};
  }
  return std::get<NormalParams>(dist);
}

bool normal_regime(const Distribution& dist) {
  try {
    return satisfies_three_sigma(n2b(moments_of(dist)));
  } catch (const InvalidMoments&) {
    return false;
  }
}

Pmf materialize(const Distribution& dist, double epsilon) {
  if (const auto* pmf = std::get_if<Pmf>(&dist)) {
    return *pmf;
  }
  const auto& normal = std::get<NormalParams>(dist);
  if (!(normal.mean > 0.0)) {
    return Pmf::point_mass(0);
  }
  return approx_tail(binomial_pmf(n2b(normal)), epsilon);
}

}  // namespace

PathEvaluator::PathEvaluator(const PathSpec& path, EvalMode mode) : path_(path), mode_(mode) {
  std::map<std::pair<std::int64_t, double>, Distribution> built;
  links_.reserve(static_cast<std::size_t>(path_.link_count()));
  for (const auto& link : path_.links()) {
    const auto key = std::make_pair(link.capacity, link.success);
    auto it = built.find(key);
    if (it == built.end()) {
      const BinomialParams params{link.capacity, link.success};
      Distribution dist = Pmf::point_mass(0);
      switch (mode_.kind) {
        case EvalMode::Kind::exact:
          dist = binomial_pmf(params);
          break;
        case EvalMode::Kind::tail:
          dist = approx_tail(binomial_pmf(params), mode_.epsilon);
          break;
        case EvalMode::Kind::normal:
          dist = b2n(params);
          break;
        case EvalMode::Kind::hybrid:
          if (satisfies_three_sigma(params)) {
            dist = b2n(params);
          } else {
            dist = approx_tail(binomial_pmf(params), mode_.epsilon);
          }
          break;
      }
      it = built.emplace(key, std::move(dist)).first;
    }
    links_.push_back(it->second);
  }
}

SwapStep PathEvaluator::swap(const Distribution& left, const Distribution& right,
                             double q) const {
  switch (mode_.kind) {
    case EvalMode::Kind::exact: {
      auto result = swap_exact(std::get<Pmf>(left), std::get<Pmf>(right), q);
      return {result.score, std::move(result.out), false};
    }
    case EvalMode::Kind::tail: {
      auto result = swap_exact(std::get<Pmf>(left), std::get<Pmf>(right), q);
      Pmf out = approx_tail(result.out, mode_.epsilon);
      const double score = out.mean();
      return {score, std::move(out), false};
    }
    case EvalMode::Kind::normal: {
      const auto out = swap_normal(std::get<NormalParams>(left), std::get<NormalParams>(right), q);
      return {out.mean, out, false};
    }
    case EvalMode::Kind::hybrid:
      break;
  }

  if (normal_regime(left) && normal_regime(right)) {
    try {
      const auto out = swap_normal(moments_of(left), moments_of(right), q);
      return {out.mean, out, false};
    } catch (const Error&) {
      // fall through to the pmf route
    }
  }
  auto result =
      swap_exact(materialize(left, mode_.epsilon), materialize(right, mode_.epsilon), q);
  Pmf out = approx_tail(result.out, mode_.epsilon);
  const double score = out.mean();
  return {score, std::move(out), true};
}

EntResult PathEvaluator::evaluate(const SwapOrder& order) const {
  order.validate(path_);
  const int n = path_.link_count();
  // segment[x] holds the distribution of the virtual link from x to next[x].
  std::vector<Distribution> segment(links_.begin(), links_.end());
  std::vector<int> prev(static_cast<std::size_t>(n) + 1);
  std::vector<int> next(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) {
    prev[static_cast<std::size_t>(x)] = x - 1;
    next[static_cast<std::size_t>(x)] = x + 1;
  }

  if (order.sequence.empty()) {
    return {expected_count(segment.front()), segment.front()};
  }
  double score = 0.0;
  for (int s : order.sequence) {
    const auto si = static_cast<std::size_t>(s);
    const auto l = static_cast<std::size_t>(prev[si]);
    const int r = next[si];
    SwapStep step = swap(segment[l], segment[si], path_.swap_prob(s));
    score = step.score;
    segment[l] = std::move(step.dist);
    next[l] = r;
    prev[static_cast<std::size_t>(r)] = static_cast<int>(l);
  }
  return {score, std::move(segment.front())};
}

EntResult ent(const PathSpec& path, const SwapOrder& order, EvalMode mode) {
  return PathEvaluator(path, mode).evaluate(order);
}

std::int64_t subpath_capacity(const PathSpec& path, int x, int y) {
  if (x < 0 || y > path.link_count() || x >= y) {
    throw std::invalid_argument("subpath_capacity: need 0 <= x < y <= n");
  }
  std::int64_t width = path.link(x).capacity;
  for (int i = x + 1; i < y; ++i) {
    width = std::min(width, path.link(i).capacity);
  }
  return width;
}

}  // namespace swaporder
