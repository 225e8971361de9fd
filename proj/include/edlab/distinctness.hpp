#pragma once

// Element-distinctness algorithms. Each is a coroutine over a Probe; the
// driver decides when an EQ answer ends the run. The algorithms themselves
// return Distinct (full sort without a tie) or GaveUp.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "edlab/core.hpp"
#include "edlab/errors.hpp"
#include "edlab/probe.hpp"
#include "edlab/profiles.hpp"
#include "edlab/sorting.hpp"
#include "edlab/task.hpp"

namespace edlab {

inline std::vector<Index> iota_indices(std::size_t n) {
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

// ---------------------------------------------------------------- block sorting

/// Sorts blocks of k lowest remaining indices while at least 2k remain, then
/// sorts the rest. Each block sort is one iteration.
inline Task<Outcome> block_sorting(Probe& probe, std::vector<Index> items, std::uint64_t k) {
  if (k < 1) throw UsageError("block sorting needs k >= 1");
  std::size_t begin = 0;
  while (items.size() - begin >= 2 * k) {
    std::vector<Index> block(items.begin() + begin, items.begin() + begin + k);
    ++probe.diagnostics().iterations;
    co_await merge_sort(probe, block);
    begin += k;
  }
  std::vector<Index> rest(items.begin() + begin, items.end());
  ++probe.diagnostics().iterations;
  co_await merge_sort(probe, rest);
  co_return Outcome::GaveUp;
}

inline Algorithm block_sorting_algorithm(std::size_t n, std::uint64_t k) {
  return [n, k](Probe& p) { return block_sorting(p, iota_indices(n), k); };
}

// ------------------------------------------------------------- median recursion

struct MedianBudget {
  std::uint64_t L = 1;
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();  // abort once small mass reaches it
  std::uint64_t mass = 0;
  bool tie_seen = false;
};

namespace detail {

/// Returns true when the small-call budget was exhausted.
inline Task<bool> median_recurse(Probe& probe, std::vector<Index> items, MedianBudget& budget,
                                 std::uint32_t depth) {
  if (items.empty()) co_return false;
  if (items.size() < budget.L) {
    auto& diag = probe.diagnostics();
    ++diag.small_calls;
    diag.small_mass += items.size();
    budget.mass += items.size();
    co_return budget.mass >= budget.limit;
  }
  const Index pivot = co_await select_kth(probe, items, (items.size() + 1) / 2, depth);
  std::vector<Index> less, greater;
  for (Index x : items) {
    if (x == pivot) continue;
    const Order o = co_await probe.compare(x, pivot, depth);
    if (o == Order::Less) {
      less.push_back(x);
    } else if (o == Order::Greater) {
      greater.push_back(x);
    } else {
      budget.tie_seen = true;
    }
  }
  items = {};
  const bool left = co_await median_recurse(probe, std::move(less), budget, depth + 1);
  if (left) co_return true;
  const bool right = co_await median_recurse(probe, std::move(greater), budget, depth + 1);
  co_return right;
}

}  // namespace detail

/// Median recursion with small-call threshold L. Distinct only when L = 1 and
/// no tie was seen (then the recursion is a full sort).
inline Task<Outcome> median_recursion(Probe& probe, std::vector<Index> items, std::uint64_t L) {
  if (L < 1) throw UsageError("median recursion needs L >= 1");
  MedianBudget budget;
  budget.L = L;
  co_await detail::median_recurse(probe, std::move(items), budget, 0);
  co_return (budget.mass == 0 && !budget.tie_seen) ? Outcome::Distinct : Outcome::GaveUp;
}

inline Algorithm median_recursion_algorithm(std::size_t n, std::uint64_t L) {
  return [n, L](Probe& p) { return median_recursion(p, iota_indices(n), L); };
}

// ------------------------------------------------------------------ simple ones

/// Merge sort of everything; Distinct if it finishes.
inline Task<Outcome> sort_check(Probe& probe, std::vector<Index> items) {
  co_await merge_sort(probe, items);
  co_return Outcome::Distinct;
}

inline Algorithm sort_check_algorithm(std::size_t n) {
  return [n](Probe& p) { return sort_check(p, iota_indices(n)); };
}

/// k = 2, 4, 8, ...: sort the first min(n, k) indices from scratch. The round
/// with k >= n sorts everything and certifies Distinct.
inline Task<Outcome> order_doubling(Probe& probe, std::size_t n) {
  for (std::uint64_t k = 2;; k *= 2) {
    std::vector<Index> prefix = iota_indices(std::min<std::uint64_t>(n, k));
    ++probe.diagnostics().iterations;
    co_await merge_sort(probe, prefix);
    if (k >= n) co_return Outcome::Distinct;
  }
}

inline Algorithm order_doubling_algorithm(std::size_t n) {
  return [n](Probe& p) { return order_doubling(p, n); };
}

/// Order-model baseline: knowing that the only duplicate pair sits at ranks k
/// and k + 1, select both and compare them.
inline Task<Outcome> quickselect_pair(Probe& probe, std::size_t n, std::size_t k) {
  if (k < 1 || k + 1 > n) throw UsageError("quickselect_pair needs 1 <= k < n");
  const Index a = co_await select_kth(probe, iota_indices(n), k);
  const Index b = co_await select_kth(probe, iota_indices(n), k + 1);
  co_await probe.compare(a, b);
  co_return Outcome::GaveUp;
}

inline Algorithm quickselect_pair_algorithm(std::size_t n, std::size_t k) {
  return [n, k](Probe& p) { return quickselect_pair(p, n, k); };
}

// ------------------------------------------------------------------ clairvoyant

struct ClairvoyantPlan {
  enum class Kind { Median, Block };
  Kind kind = Kind::Block;
  std::uint64_t parameter = 1;  // L for Median, k for Block
  double bound = 0.0;           // min(bound_1, bound_2)
};

inline ClairvoyantPlan plan_clairvoyant(const ClusterProfile& profile) {
  const StepFunctions f(profile);
  const auto l1 = select_L1(f);
  const auto l2 = select_L2(f);
  if (l1 && l1->bound < l2.bound) return {ClairvoyantPlan::Kind::Median, l1->L, l1->bound};
  return {ClairvoyantPlan::Kind::Block, 2 * f.D(l2.L), l2.bound};
}

inline Algorithm plan_algorithm(const ClairvoyantPlan& plan, std::size_t n) {
  if (plan.kind == ClairvoyantPlan::Kind::Median) return median_recursion_algorithm(n, plan.parameter);
  return block_sorting_algorithm(n, plan.parameter);
}

inline Algorithm clairvoyant_algorithm(const ClusterProfile& profile) {
  return plan_algorithm(plan_clairvoyant(profile), profile.n());
}

/// The clairvoyant algorithm for `profile`, run on `instance`.
inline RunReport run_clairvoyant(const Instance& instance, const ClusterProfile& profile,
                                 CountingOracle& oracle) {
  if (!verify_graph(instance, profile)) throw UsageError("instance does not realize the given profile");
  return run(oracle, clairvoyant_algorithm(profile));
}

// ----------------------------------------------------------------- preprocessed

struct PreprocessedPlan {
  enum class Kind { Deferred, Block };
  Kind kind = Kind::Block;
  std::uint64_t k = 0;
  ClusterProfile profile;
  std::uint64_t size_comparisons = 0;
  ApproxL2 approx;
};

/// Size arithmetic only. Block sorting with k = 2 D(L2 approx) when the
/// objective is below n and 2 C(L2 approx) < n; block sorting cannot be
/// trusted to meet a duplicate otherwise, so the exact selection is deferred
/// to run time.
inline PreprocessedPlan preprocess(const ClusterProfile& profile) {
  PreprocessedPlan plan;
  plan.profile = profile;
  plan.approx = approx_L2(profile);
  plan.size_comparisons = plan.approx.size_comparisons;
  const auto [c, d] = cd(profile, plan.approx.L);
  if (plan.approx.objective >= static_cast<double>(profile.n()) || 2 * c >= profile.n()) {
    plan.kind = PreprocessedPlan::Kind::Deferred;
  } else {
    plan.kind = PreprocessedPlan::Kind::Block;
    plan.k = 2 * d;
  }
  return plan;
}

inline Algorithm preprocessed_algorithm(const PreprocessedPlan& plan) {
  if (plan.kind == PreprocessedPlan::Kind::Deferred) return clairvoyant_algorithm(plan.profile);
  return block_sorting_algorithm(plan.profile.n(), plan.k);
}

inline RunReport run_preprocessed(const PreprocessedPlan& plan, const Instance& instance,
                                  CountingOracle& oracle) {
  if (!verify_graph(instance, plan.profile)) throw UsageError("instance does not realize the planned profile");
  return run(oracle, preprocessed_algorithm(plan));
}

}  // namespace edlab
