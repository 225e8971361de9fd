#pragma once

// The profile-oblivious algorithm: O(log log n) branches simulated round-robin,
// one oracle comparison per live branch per turn. Branch families:
//   block:i   block sorting with k = 2 * 2^(2^i), i = 0..t
//   double    the doubling checker (the only branch that can certify Distinct)
//   median:i  median recursion with doubling small-call budget C and
//             L = max(2, C / 2^i), for i = 1, 2, 4, ..., 2^t
// where t is the smallest integer with 2^(2^t) >= n.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "edlab/distinctness.hpp"
#include "edlab/probe.hpp"
#include "edlab/task.hpp"

namespace edlab {

/// Smallest t with 2^(2^t) >= n (ceil(log2 log2 n) for n >= 3).
inline unsigned loglog_ceiling(std::uint64_t n) {
  unsigned t = 0;
  while (t < 6 && (std::uint64_t{1} << std::min<unsigned>(63, 1u << t)) < n) ++t;
  return t;
}

inline unsigned floor_log2(std::uint64_t x) {
  unsigned r = 0;
  while (x >>= 1) ++r;
  return r;
}

/// One median branch: budgets C = 1, 2, 4, ...; each C restarts the recursion
/// with a fresh small-call budget and keeps the top floor(log2(n/C)) levels
/// memoized. Gives up once a pass completes without exhausting its budget.
inline Task<Outcome> doubling_median(Probe& probe, std::size_t n, unsigned i) {
  for (std::uint64_t C = 1;; C *= 2) {
    MedianBudget budget;
    budget.L = std::max<std::uint64_t>(2, C >> std::min(i, 63u));
    budget.limit = C;
    probe.set_memo_limit(C > n ? 0 : floor_log2(n / C));
    ++probe.diagnostics().iterations;
    const bool aborted = co_await detail::median_recurse(probe, iota_indices(n), budget, 0);
    if (!aborted) co_return Outcome::GaveUp;
  }
}

struct ObliviousBranch {
  std::string label;
  Algorithm algorithm;
};

inline std::vector<ObliviousBranch> oblivious_branches(std::size_t n) {
  std::vector<ObliviousBranch> out;
  const unsigned t = loglog_ceiling(n);
  for (unsigned i = 0; i <= t; ++i) {
    const unsigned e = 1u << i;
    const std::uint64_t k = e >= 63 ? std::numeric_limits<std::uint64_t>::max() / 4 : (std::uint64_t{2} << e);
    out.push_back({"block:" + std::to_string(i), block_sorting_algorithm(n, k)});
  }
  out.push_back({"double", order_doubling_algorithm(n)});
  for (unsigned i = 1; i <= (1u << t); i *= 2) {
    out.push_back({"median:" + std::to_string(i), [n, i](Probe& p) { return doubling_median(p, n, i); }});
  }
  return out;
}

inline Task<Outcome> oblivious(Probe& outer, std::size_t n) {
  if (n < 2) throw UsageError("oblivious algorithm needs n >= 2");
  std::vector<std::unique_ptr<Execution>> live;
  for (auto& b : oblivious_branches(n))
    live.push_back(std::make_unique<Execution>(b.label, b.algorithm, WitnessPolicy::none()));

  auto& diag = outer.diagnostics();
  for (auto& e : live) diag.branch_costs[e->label()] = 0;
  while (!live.empty()) {
    ++diag.scheduler_rounds;
    for (std::size_t b = 0; b < live.size();) {
      Execution& e = *live[b];
      const auto req = e.next();
      if (!req) {
        if (e.outcome() == Outcome::Distinct) co_return Outcome::Distinct;
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(b));
        continue;
      }
      const Order o = co_await outer.compare(req->x, req->y);
      e.answer(o);
      ++diag.branch_costs[e.label()];
      ++b;
    }
  }
  co_return Outcome::GaveUp;
}

inline Algorithm oblivious_algorithm(std::size_t n) {
  return [n](Probe& p) { return oblivious(p, n); };
}

}  // namespace edlab
