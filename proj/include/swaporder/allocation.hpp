#pragma once

#include "swaporder/order_search.hpp"
#include "swaporder/swap_engine.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace swaporder {

/// Memory count Q_i at each of the n+1 nodes.
struct MemoryBudget {
  std::vector<std::int64_t> per_node;

  void validate() const;
};

/// Memory pairs m_i assigned to each of the n links.
struct Allocation {
  std::vector<std::int64_t> per_link;

  friend bool operator==(const Allocation&, const Allocation&) = default;
  friend auto operator<=>(const Allocation&, const Allocation&) = default;
};

/// Linear capacity model c_i = max(1, round(kappa_i * m_i)).
struct CapacityModel {
  std::vector<double> kappa_per_link;

  std::int64_t capacity(int link, std::int64_t memory_pairs) const;
};

bool is_feasible(const Allocation& allocation, const MemoryBudget& budget);
/// Feasible and no single m_i can be incremented without breaking a constraint.
bool is_maximal(const Allocation& allocation, const MemoryBudget& budget);

/// Visits every maximal allocation in lexicographic order. Throws Infeasible
/// when some interior node has fewer than two memories.
void for_each_maximal_allocation(const MemoryBudget& budget,
                                 const std::function<void(const Allocation&)>& visit);
std::vector<Allocation> enumerate_allocations(const MemoryBudget& budget);

struct ScoredAllocation {
  Allocation allocation;
  ScoredOrder best;
};

struct AllocationOptions {
  std::uint64_t allocation_cap = 100'000;
  /// Brute-force the order per allocation while Catalan(n-1) stays within this.
  std::uint64_t exact_order_tree_cap = 132;
  SearchOptions search;
  /// When exceeding allocation_cap: coordinate ascent instead of BudgetExceeded.
  bool allow_heuristic = true;
};

struct AllocationResult {
  ScoredAllocation best;
  /// Coordinate ascent was used because the maximal points exceeded the cap.
  bool heuristic = false;
  std::vector<ScoredAllocation> evaluated;
};

/// Generic driver: maximizes `score(allocation)` over the maximal allocations
/// (ties to the lexicographically smallest allocation).
AllocationResult optimize_allocation_with(
    const MemoryBudget& budget, const std::function<ScoredOrder(const Allocation&)>& score,
    const AllocationOptions& options = {});

/// Best order for the path that `model` builds from `allocation`.
ScoredOrder score_allocation(const Allocation& allocation, const CapacityModel& model,
                             const std::vector<double>& link_probs,
                             const std::vector<double>& swap_probs, EvalMode mode,
                             const AllocationOptions& options = {});

AllocationResult optimize_allocation(const MemoryBudget& budget, const CapacityModel& model,
                                     const std::vector<double>& link_probs,
                                     const std::vector<double>& swap_probs, EvalMode mode,
                                     const AllocationOptions& options = {});

}  // namespace swaporder
