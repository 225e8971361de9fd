#pragma once

// Comparison-counted sorting and deterministic selection. Every comparison
// goes through a Probe. Equal answers are ordered by index, which gives a
// stable total preorder; whether an EQ ends the computation is the driver's
// decision (WitnessPolicy), not the algorithm's.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "edlab/errors.hpp"
#include "edlab/probe.hpp"
#include "edlab/task.hpp"

namespace edlab {

/// Strict "a before b" under the stable preorder, given the oracle answer for (a, b).
constexpr bool precedes(Index a, Index b, Order o) noexcept {
  return o == Order::Less || (o == Order::Equal && a < b);
}

/// Bottom-up merge sort; a block of b elements costs at most b*ceil(log2 b) comparisons.
inline Task<void> merge_sort(Probe& probe, std::vector<Index>& items,
                             std::uint32_t level = Probe::kNoMemo) {
  const std::size_t n = items.size();
  std::vector<Index> buffer(n);
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        const Order o = co_await probe.compare(items[i], items[j], level);
        if (o == Order::Greater) {
          buffer[out++] = items[j++];
        } else {
          buffer[out++] = items[i++];
        }
      }
      while (i < mid) buffer[out++] = items[i++];
      while (j < hi) buffer[out++] = items[j++];
    }
    items.swap(buffer);
  }
}

namespace detail {

inline Task<void> insertion_sort(Probe& probe, std::vector<Index>& v, std::size_t lo, std::size_t hi,
                                 std::uint32_t level) {
  for (std::size_t i = lo + 1; i < hi; ++i) {
    for (std::size_t j = i; j > lo; --j) {
      const Order o = co_await probe.compare(v[j - 1], v[j], level);
      if (precedes(v[j - 1], v[j], o)) break;
      std::swap(v[j - 1], v[j]);
    }
  }
}

}  // namespace detail

/// Comparisons per element that select_kth never exceeds (asserted by tests).
inline constexpr double kSelectConstant = 30.0;

/// Median-of-medians selection (groups of five). Returns the item of 1-based
/// rank k under the stable preorder.
inline Task<Index> select_kth(Probe& probe, std::vector<Index> items, std::size_t k,
                              std::uint32_t level = Probe::kNoMemo) {
  if (k < 1 || k > items.size()) throw UsageError("select_kth: rank out of range");
  while (true) {
    if (items.size() <= 5) {
      co_await detail::insertion_sort(probe, items, 0, items.size(), level);
      co_return items[k - 1];
    }
    std::vector<Index> medians;
    medians.reserve(items.size() / 5 + 1);
    for (std::size_t g = 0; g < items.size(); g += 5) {
      const std::size_t end = std::min(g + 5, items.size());
      co_await detail::insertion_sort(probe, items, g, end, level);
      medians.push_back(items[g + (end - g - 1) / 2]);
    }
    const std::size_t mid_rank = (medians.size() + 1) / 2;
    const Index pivot = co_await select_kth(probe, std::move(medians), mid_rank, level);

    std::vector<Index> before, after;
    for (Index x : items) {
      if (x == pivot) continue;
      const Order o = co_await probe.compare(x, pivot, level);
      if (precedes(x, pivot, o)) {
        before.push_back(x);
      } else {
        after.push_back(x);
      }
    }
    const std::size_t pivot_rank = before.size() + 1;
    if (k == pivot_rank) co_return pivot;
    if (k < pivot_rank) {
      items = std::move(before);
    } else {
      items = std::move(after);
      k -= pivot_rank;
    }
  }
}

}  // namespace edlab
