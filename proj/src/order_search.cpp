#include "swaporder/order_search.hpp"

#include "swaporder/errors.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace swaporder {

std::uint64_t catalan(int k) noexcept {
  if (k < 0) {
    return 0;
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // C_{j+1} = sum_i C_i C_{j-i}, saturating.
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k) + 1, 0);
  c[0] = 1;
  for (std::size_t j = 1; j < c.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const std::uint64_t a = c[i];
      const std::uint64_t b = c[j - 1 - i];
      if (b != 0 && a > kMax / b) {
        c[j] = kMax;
        break;
      }
      c[j] = (c[j] > kMax - a * b) ? kMax : c[j] + a * b;
    }
  }
  return c.back();
}

namespace {

// Continuation-passing enumeration of the trees over links lo..hi-1: every
// complete post-order for the interval is appended to `seq` when `done` runs.
void generate(int lo, int hi, std::vector<int>& seq, const std::function<void()>& done) {
  if (hi - lo == 1) {
    done();
    return;
  }
  for (int root = lo + 1; root < hi; ++root) {
    generate(lo, root, seq, [&] {
      generate(root, hi, seq, [&] {
        seq.push_back(root);
        done();
        seq.pop_back();
      });
    });
  }
}

void midpoint_order(int lo, int hi, std::vector<int>& out) {
  if (hi - lo < 2) {
    return;
  }
  const int mid = (lo + hi + 1) / 2;
  midpoint_order(lo, mid, out);
  midpoint_order(mid, hi, out);
  out.push_back(mid);
}

}  // namespace

void for_each_tree(int link_count, const std::function<void(const SwapTree&)>& visit) {
  if (link_count < 1) {
    throw std::invalid_argument("for_each_tree: link_count must be >= 1");
  }
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(link_count));
  generate(0, link_count, seq, [&] { visit(SwapTree{link_count, SwapOrder{seq}}); });
}

std::vector<SwapTree> enumerate_trees(int link_count) {
  std::vector<SwapTree> trees;
  for_each_tree(link_count, [&](const SwapTree& tree) { trees.push_back(tree); });
  return trees;
}

SwapOrder canonical_order(const SwapOrder& order, int link_count) {
  const int interior = link_count - 1;
  if (static_cast<int>(order.sequence.size()) != interior) {
    throw InvalidOrder("canonical_order: order " + order.to_string() + " has wrong length");
  }
  const auto size = static_cast<std::size_t>(link_count) + 1;
  std::vector<int> prev(size);
  std::vector<int> next(size);
  std::vector<int> root_of(size, -1);  // root of the segment starting at x; -1 = elementary
  std::vector<std::pair<int, int>> children(size, {-1, -1});
  std::vector<bool> seen(size, false);
  for (int x = 0; x <= link_count; ++x) {
    prev[static_cast<std::size_t>(x)] = x - 1;
    next[static_cast<std::size_t>(x)] = x + 1;
  }
  for (int s : order.sequence) {
    if (s < 1 || s > interior || seen[static_cast<std::size_t>(s)]) {
      throw InvalidOrder("canonical_order: " + order.to_string() + " is not a permutation");
    }
    seen[static_cast<std::size_t>(s)] = true;
    const auto si = static_cast<std::size_t>(s);
    const auto l = static_cast<std::size_t>(prev[si]);
    const int r = next[si];
    children[si] = {root_of[l], root_of[si]};
    root_of[l] = s;
    next[l] = r;
    prev[static_cast<std::size_t>(r)] = static_cast<int>(l);
  }

  SwapOrder canonical;
  const std::function<void(int)> post_order = [&](int node) {
    if (node < 0) {
      return;
    }
    const auto [left, right] = children[static_cast<std::size_t>(node)];
    post_order(left);
    post_order(right);
    canonical.sequence.push_back(node);
  };
  post_order(root_of[0]);
  return canonical;
}

std::vector<ScoredOrder> score_all_trees(const PathSpec& path, EvalMode mode,
                                         const SearchOptions& options) {
  const std::uint64_t count = catalan(path.link_count() - 1);
  if (count > options.tree_cap) {
    throw BudgetExceeded("brute force: " + std::to_string(count) + " trees exceed the cap of " +
                         std::to_string(options.tree_cap));
  }
  std::vector<ScoredOrder> scored;
  scored.reserve(static_cast<std::size_t>(count));
  for_each_tree(path.link_count(),
                [&](const SwapTree& tree) { scored.push_back({tree.canonical_order, 0.0}); });

  const PathEvaluator evaluator(path, mode);
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs,
                                                        static_cast<unsigned>(scored.size())));
  const auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < scored.size(); i += jobs) {
      scored[i].score = evaluator.evaluate(scored[i].order).score;
    }
  };
  if (jobs == 1) {
    work(0);
    return scored;
  }

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
  return scored;
}

ScoredOrder brute_force(const PathSpec& path, EvalMode mode, const SearchOptions& options) {
  const auto scored = score_all_trees(path, mode, options);
  const ScoredOrder* best = &scored.front();
  for (const auto& candidate : scored) {
    if (candidate.score > best->score ||
        (candidate.score == best->score && candidate.order < best->order)) {
      best = &candidate;
    }
  }
  return *best;
}

GreedyTrace greedy_swap_traced(const PathSpec& path, EvalMode mode) {
  const PathEvaluator evaluator(path, mode);
  const int n = path.link_count();
  GreedyTrace trace;
  if (n == 1) {
    trace.result.score = expected_count(evaluator.link_distribution(0));
    return trace;
  }

  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<Distribution> segment;
  segment.reserve(size);
  for (int x = 0; x < n; ++x) {
    segment.push_back(evaluator.link_distribution(x));
  }
  std::vector<int> prev(size);
  std::vector<int> next(size);
  for (int x = 0; x <= n; ++x) {
    prev[static_cast<std::size_t>(x)] = x - 1;
    next[static_cast<std::size_t>(x)] = x + 1;
  }

  // Candidate swap at each interior node x: s-score and resulting p(x^l, x^r).
  std::vector<SwapStep> candidate(size);
  std::vector<bool> alive(size, false);
  const auto rescore = [&](int x) {
    const auto xi = static_cast<std::size_t>(x);
    candidate[xi] = evaluator.swap(segment[static_cast<std::size_t>(prev[xi])], segment[xi],
                                   path.swap_prob(x));
    ++trace.swap_calls;
  };
  for (int x = 1; x < n; ++x) {
    alive[static_cast<std::size_t>(x)] = true;
    rescore(x);
  }

  for (int step = 1; step < n; ++step) {
    int s = -1;
    double best = 0.0;
    for (int x = 1; x < n; ++x) {
      const auto xi = static_cast<std::size_t>(x);
      if (!alive[xi]) {
        continue;
      }
      if (s < 0 || candidate[xi].score > best) {
        s = x;
        best = candidate[xi].score;
      }
    }
    for (int x = s + 1; x < n; ++x) {
      if (alive[static_cast<std::size_t>(x)] && candidate[static_cast<std::size_t>(x)].score == best) {
        trace.had_ties = true;
      }
    }

    const auto si = static_cast<std::size_t>(s);
    const int l = prev[si];
    const int r = next[si];
    trace.result.order.sequence.push_back(s);
    trace.result.score = candidate[si].score;
    segment[static_cast<std::size_t>(l)] = std::move(candidate[si].dist);
    alive[si] = false;
    next[static_cast<std::size_t>(l)] = r;
    prev[static_cast<std::size_t>(r)] = l;

    if (l > 0) {
      rescore(l);
    }
    if (r < n) {
      rescore(r);
    }
  }
  return trace;
}

ScoredOrder greedy_swap(const PathSpec& path, EvalMode mode) {
  return greedy_swap_traced(path, mode).result;
}

SwapOrder balanced_tree(const PathSpec& path) {
  SwapOrder order;
  midpoint_order(0, path.link_count(), order.sequence);
  return order;
}

SwapOrder left_to_right(const PathSpec& path) {
  SwapOrder order;
  for (int x = 1; x < path.link_count(); ++x) {
    order.sequence.push_back(x);
  }
  return order;
}

SwapOrder right_to_left(const PathSpec& path) {
  SwapOrder order = left_to_right(path);
  std::reverse(order.sequence.begin(), order.sequence.end());
  return order;
}

ScoredOrder vora_swap(const PathSpec& path, EvalMode mode) {
  ScoredOrder greedy = greedy_swap(path, mode);
  SwapOrder balanced = balanced_tree(path);
  const double balanced_score = ent(path, balanced, mode).score;
  if (greedy.score > balanced_score) {
    return greedy;
  }
  return {std::move(balanced), balanced_score};
}

}  // namespace swaporder
