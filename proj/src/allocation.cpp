#include "swaporder/allocation.hpp"

#include "swaporder/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swaporder {

namespace {

std::size_t idx(std::int64_t i) { return static_cast<std::size_t>(i); }

// Largest value m_i may take given its neighbours.
std::int64_t upper_bound(const std::vector<std::int64_t>& m, const MemoryBudget& budget,
                         std::int64_t i) {
  const auto n = static_cast<std::int64_t>(m.size());
  const std::int64_t left = budget.per_node[idx(i)] - (i > 0 ? m[idx(i - 1)] : 0);
  const std::int64_t right = budget.per_node[idx(i + 1)] - (i + 1 < n ? m[idx(i + 1)] : 0);
  return std::min(left, right);
}

void check_shape(const Allocation& allocation, const MemoryBudget& budget) {
  if (allocation.per_link.size() + 1 != budget.per_node.size()) {
    throw std::invalid_argument("allocation and budget sizes disagree");
  }
}

// Raises every link to its upper bound, left to right.
void saturate(std::vector<std::int64_t>& m, const MemoryBudget& budget) {
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.size()); ++i) {
    m[idx(i)] = std::max(m[idx(i)], upper_bound(m, budget, i));
  }
}

}  // namespace

void MemoryBudget::validate() const {
  if (per_node.size() < 2) {
    throw std::invalid_argument("MemoryBudget: need at least two nodes");
  }
  for (auto q : per_node) {
    if (q < 1) {
      throw std::invalid_argument("MemoryBudget: every node needs at least one memory");
    }
  }
  for (std::size_t i = 1; i + 1 < per_node.size(); ++i) {
    if (per_node[i] < 2) {
      throw Infeasible("interior node " + std::to_string(i) + " has " +
                       std::to_string(per_node[i]) + " memories; both adjacent links need one");
    }
  }
}

std::int64_t CapacityModel::capacity(int link, std::int64_t memory_pairs) const {
  const double kappa = kappa_per_link.at(static_cast<std::size_t>(link));
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("CapacityModel: kappa must be positive");
  }
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(kappa * static_cast<double>(memory_pairs))));
}

bool is_feasible(const Allocation& allocation, const MemoryBudget& budget) {
  check_shape(allocation, budget);
  const auto& m = allocation.per_link;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.size()); ++i) {
    if (m[idx(i)] < 1 || m[idx(i)] > upper_bound(m, budget, i)) {
      return false;
    }
  }
  return true;
}

bool is_maximal(const Allocation& allocation, const MemoryBudget& budget) {
  if (!is_feasible(allocation, budget)) {
    return false;
  }
  const auto& m = allocation.per_link;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.size()); ++i) {
    if (m[idx(i)] < upper_bound(m, budget, i)) {
      return false;
    }
  }
  return true;
}

void for_each_maximal_allocation(const MemoryBudget& budget,
                                 const std::function<void(const Allocation&)>& visit) {
  budget.validate();
  const auto& q = budget.per_node;
  const auto n = static_cast<std::int64_t>(q.size()) - 1;
  Allocation current{std::vector<std::int64_t>(idx(n), 0)};
  auto& m = current.per_link;

  // m[i-1] is final once m[i] is chosen, so its maximality is checked then.
  const std::function<void(std::int64_t)> choose = [&](std::int64_t i) {
    if (i == n) {
      if (m[idx(n - 1)] == upper_bound(m, budget, n - 1)) {
        visit(current);
      }
      return;
    }
    const std::int64_t from_left = q[idx(i)] - (i > 0 ? m[idx(i - 1)] : 0);
    const std::int64_t from_right = q[idx(i + 1)] - (i + 1 < n ? 1 : 0);
    const std::int64_t top = std::min(from_left, from_right);
    for (std::int64_t v = 1; v <= top; ++v) {
      m[idx(i)] = v;
      if (i > 0 && m[idx(i - 1)] != upper_bound(m, budget, i - 1)) {
        continue;
      }
      choose(i + 1);
    }
    m[idx(i)] = 0;
  };
  choose(0);
}

std::vector<Allocation> enumerate_allocations(const MemoryBudget& budget) {
  std::vector<Allocation> out;
  for_each_maximal_allocation(budget, [&](const Allocation& a) { out.push_back(a); });
  return out;
}

namespace {

struct CapReached {};

std::uint64_t count_maximal(const MemoryBudget& budget, std::uint64_t stop_after) {
  std::uint64_t count = 0;
  try {
    for_each_maximal_allocation(budget, [&](const Allocation&) {
      if (++count > stop_after) {
        throw CapReached{};
      }
    });
  } catch (const CapReached&) {
  }
  return count;
}

Allocation balanced_start(const MemoryBudget& budget) {
  const auto& q = budget.per_node;
  const std::size_t n = q.size() - 1;
  const auto share = [&](std::size_t node) {
    return (node == 0 || node == n) ? q[node] : q[node] / 2;
  };
  Allocation start{std::vector<std::int64_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    start.per_link[i] = std::max<std::int64_t>(1, std::min(share(i), share(i + 1)));
  }
  saturate(start.per_link, budget);
  return start;
}

}  // namespace

AllocationResult optimize_allocation_with(
    const MemoryBudget& budget, const std::function<ScoredOrder(const Allocation&)>& score,
    const AllocationOptions& options) {
  budget.validate();
  AllocationResult result;
  bool have_best = false;
  const auto consider = [&](const Allocation& allocation) {
    ScoredAllocation scored{allocation, score(allocation)};
    if (!have_best || scored.best.score > result.best.best.score ||
        (scored.best.score == result.best.best.score &&
         scored.allocation < result.best.allocation)) {
      result.best = scored;
      have_best = true;
    }
    result.evaluated.push_back(std::move(scored));
    return result.evaluated.back().best.score;
  };

  if (count_maximal(budget, options.allocation_cap) <= options.allocation_cap) {
    for_each_maximal_allocation(budget, consider);
    return result;
  }
  if (!options.allow_heuristic) {
    throw BudgetExceeded("more than " + std::to_string(options.allocation_cap) +
                         " maximal allocations");
  }

  // Coordinate ascent over one-unit transfers between adjacent links.
  result.heuristic = true;
  Allocation current = balanced_start(budget);
  double current_score = consider(current);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < current.per_link.size() && !improved; ++i) {
      for (int direction : {+1, -1}) {
        Allocation trial = current;
        trial.per_link[i] += direction;
        trial.per_link[i + 1] -= direction;
        if (trial.per_link[i] < 1 || trial.per_link[i + 1] < 1) {
          continue;
        }
        if (!is_feasible(trial, budget)) {
          continue;
        }
        saturate(trial.per_link, budget);
        const double s = consider(trial);
        if (s > current_score) {
          current = std::move(trial);
          current_score = s;
          improved = true;
          break;
        }
      }
    }
  }
  return result;
}

ScoredOrder score_allocation(const Allocation& allocation, const CapacityModel& model,
                             const std::vector<double>& link_probs,
                             const std::vector<double>& swap_probs, EvalMode mode,
                             const AllocationOptions& options) {
  const auto n = allocation.per_link.size();
  if (link_probs.size() != n || model.kappa_per_link.size() != n) {
    throw std::invalid_argument("score_allocation: per-link parameter sizes disagree");
  }
  std::vector<LinkSpec> links;
  links.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    links.push_back({model.capacity(static_cast<int>(i), allocation.per_link[i]), link_probs[i]});
  }
  const PathSpec path(std::move(links), swap_probs);
  if (catalan(path.link_count() - 1) <= options.exact_order_tree_cap) {
    return brute_force(path, mode, options.search);
  }
  return vora_swap(path, mode);
}

AllocationResult optimize_allocation(const MemoryBudget& budget, const CapacityModel& model,
                                     const std::vector<double>& link_probs,
                                     const std::vector<double>& swap_probs, EvalMode mode,
                                     const AllocationOptions& options) {
  return optimize_allocation_with(
      budget,
      [&](const Allocation& allocation) {
        return score_allocation(allocation, model, link_probs, swap_probs, mode, options);
      },
      options);
}

}  // namespace swaporder
