#pragma once

#include "swaporder/swap_engine.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace swaporder {

/// A full binary swap tree over `link_count` links, identified by its
/// post-order traversal (children before parent, left before right).
struct SwapTree {
  int link_count = 1;
  SwapOrder canonical_order;
};

struct ScoredOrder {
  SwapOrder order;
  double score = 0.0;
};

struct SearchOptions {
  std::uint64_t tree_cap = 1'000'000;
  /// Worker threads for brute force; results do not depend on it.
  unsigned jobs = 1;
};

/// Catalan number C_k (saturates at UINT64_MAX).
std::uint64_t catalan(int k) noexcept;

/// Calls `visit` once for each of the Catalan(link_count - 1) swap trees,
/// generated by recursive choice of the root swap node per interval.
void for_each_tree(int link_count, const std::function<void(const SwapTree&)>& visit);

std::vector<SwapTree> enumerate_trees(int link_count);

/// Canonical (post-order) representative of the tree that `order` builds.
SwapOrder canonical_order(const SwapOrder& order, int link_count);

/// Every tree's canonical order with its score, in enumeration order.
/// Throws BudgetExceeded when the tree count exceeds options.tree_cap.
std::vector<ScoredOrder> score_all_trees(const PathSpec& path, EvalMode mode,
                                         const SearchOptions& options = {});

/// Best tree; ties go to the lexicographically smallest canonical order.
ScoredOrder brute_force(const PathSpec& path, EvalMode mode, const SearchOptions& options = {});

struct GreedyTrace {
  ScoredOrder result;
  std::size_t swap_calls = 0;
  /// An argmax selection had to break an exact score tie.
  bool had_ties = false;
};

/// Highest s-score first. After each selection only the order neighbours of
/// the swapped node are re-scored.
GreedyTrace greedy_swap_traced(const PathSpec& path, EvalMode mode);
ScoredOrder greedy_swap(const PathSpec& path, EvalMode mode);

/// Doubling order from recursive midpoint splits, ceil((lo + hi) / 2).
SwapOrder balanced_tree(const PathSpec& path);
SwapOrder left_to_right(const PathSpec& path);
SwapOrder right_to_left(const PathSpec& path);

/// Greedy result if its score is strictly greater than the balanced tree's,
/// otherwise the balanced tree.
ScoredOrder vora_swap(const PathSpec& path, EvalMode mode);

}  // namespace swaporder
