#pragma once

// Cluster-size profiles and the quantities derived from them: the step
// functions C(L) (total size of clusters smaller than L) and D(L) (number of
// clusters of size at least L), parameter selection for the clairvoyant
// algorithm, the linear-time approximation of the block-sorting parameter,
// the reduced profile G', and the closed-form lower bounds.
//
// All logarithms are base 2. Minimizations scan the constant pieces of C and
// D instead of every L, and break ties toward the smaller L.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "edlab/cluster_profile.hpp"
#include "edlab/core.hpp"
#include "edlab/errors.hpp"
#include "edlab/probe.hpp"
#include "edlab/sorting.hpp"

namespace edlab {

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

/// C * max(0, log2(C / L)), with C = 0 contributing 0.
inline double median_term(std::uint64_t c, std::uint64_t L) {
  if (c == 0) return 0.0;
  return static_cast<double>(c) * std::max(0.0, std::log2(static_cast<double>(c) / static_cast<double>(L)));
}

/// (C + D) * max(1, log2 D).
inline double block_objective(std::uint64_t c, std::uint64_t d) {
  const double lg = d == 0 ? 0.0 : std::log2(static_cast<double>(d));
  return static_cast<double>(c + d) * std::max(1.0, lg);
}

/// (1/4) * C * max(0, log2(C / (2L))).
inline double median_lower_term(std::uint64_t c, std::uint64_t L) {
  if (c == 0) return 0.0;
  return 0.25 * static_cast<double>(c) *
         std::max(0.0, std::log2(static_cast<double>(c) / (2.0 * static_cast<double>(L))));
}

/// One constant piece of the step functions: C(L) = c and D(L) = d for lo <= L <= hi.
struct StepSegment {
  std::uint64_t lo = 1;
  std::uint64_t hi = kUnbounded;
  std::uint64_t c = 0;
  std::uint64_t d = 0;
};

class StepFunctions {
 public:
  explicit StepFunctions(const ClusterProfile& profile) : n_(profile.n()), m_(profile.m()) {
    std::map<std::uint64_t, std::uint64_t> count;
    for (auto s : profile.sizes()) ++count[s];
    std::uint64_t lo = 1, c = 0, d = m_;
    for (auto [size, k] : count) {
      segments_.push_back({lo, size, c, d});
      lo = size + 1;
      c += size * k;
      d -= k;
      breakpoints_.push_back(size);
    }
    segments_.push_back({lo, kUnbounded, c, d});
  }

  std::uint64_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  const std::vector<StepSegment>& segments() const noexcept { return segments_; }
  /// Sorted distinct cluster sizes.
  const std::vector<std::uint64_t>& breakpoints() const noexcept { return breakpoints_; }

  const StepSegment& at(std::uint64_t L) const {
    if (L < 1) throw UsageError("C(L), D(L) need L >= 1");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), L,
                               [](std::uint64_t v, const StepSegment& s) { return v < s.lo; });
    return *(it - 1);
  }
  std::uint64_t C(std::uint64_t L) const { return at(L).c; }
  std::uint64_t D(std::uint64_t L) const { return at(L).d; }

 private:
  std::uint64_t n_;
  std::size_t m_;
  std::vector<StepSegment> segments_;
  std::vector<std::uint64_t> breakpoints_;
};

struct CD {
  std::uint64_t c = 0;
  std::uint64_t d = 0;
  friend bool operator==(const CD&, const CD&) = default;
};

inline CD cd(const ClusterProfile& profile, std::uint64_t L) {
  const StepFunctions f(profile);
  const auto& seg = f.at(L);
  return {seg.c, seg.d};
}

struct Selection {
  std::uint64_t L = 1;
  double bound = 0.0;
};

/// argmin over {L >= 2 : C(L) < n} of n + C(L) * max(0, log2(C(L)/L)).
/// Empty when every cluster is a singleton.
inline std::optional<Selection> select_L1(const StepFunctions& f) {
  std::optional<Selection> best;
  for (const auto& seg : f.segments()) {
    if (seg.c >= f.n()) continue;
    const std::uint64_t lo = std::max<std::uint64_t>(seg.lo, 2);
    if (lo > seg.hi) continue;
    // The term is non-increasing in L on a piece and flat once L >= C.
    std::uint64_t L;
    if (seg.c == 0) {
      L = lo;
    } else if (seg.c <= seg.hi) {
      L = std::max(lo, seg.c);
    } else {
      L = seg.hi;
    }
    const double value = static_cast<double>(f.n()) + median_term(seg.c, L);
    if (!best || value < best->bound) best = Selection{L, value};
  }
  return best;
}

inline std::optional<Selection> select_L1(const ClusterProfile& profile) {
  return select_L1(StepFunctions(profile));
}

/// argmin over {L >= 1 : 2 C(L) < n} of (C(L) + D(L)) * max(1, log2 D(L)).
inline Selection select_L2(const StepFunctions& f) {
  std::optional<Selection> best;
  for (const auto& seg : f.segments()) {
    if (2 * seg.c >= f.n()) continue;
    const double value = block_objective(seg.c, seg.d);
    if (!best || value < best->bound) best = Selection{seg.lo, value};
  }
  if (!best) throw InternalError("select_L2: L = 1 always qualifies");
  return *best;
}

inline Selection select_L2(const ClusterProfile& profile) { return select_L2(StepFunctions(profile)); }

/// One level of the recursive-median approximation.
struct ApproxLevel {
  std::uint64_t t = 0;
  std::uint64_t c = 0;
  std::uint64_t d = 0;
  double objective = 0.0;
};

struct ApproxL2 {
  std::uint64_t L = 1;
  double objective = 0.0;
  std::uint64_t size_comparisons = 0;
  std::vector<ApproxLevel> levels;
};

/// Linear-time approximation of select_L2. Repeatedly selects the upper median
/// of the surviving sizes S' and keeps the half at or above it; t_j is the
/// minimum of S' at level j, and C(t_j), D(t_j) are maintained from the
/// removed part. Returns the best t_j (within factor 3 of optimal). Size
/// comparisons go through a counting oracle over the sizes and are reported.
inline ApproxL2 approx_L2(const ClusterProfile& profile) {
  std::vector<std::uint64_t> ranks(profile.sizes().begin(), profile.sizes().end());
  const Instance sizes = Instance::from_ranks(ranks);
  CountingOracle oracle(sizes);

  ApproxL2 result;
  auto record = [&](std::uint64_t t, std::uint64_t c, std::uint64_t d) {
    const double obj = block_objective(c, d);
    result.levels.push_back({t, c, d, obj});
    if (result.levels.size() == 1 || obj < result.objective) {
      result.L = t;
      result.objective = obj;
    }
  };

  std::vector<Index> survivors(profile.m());
  for (Index i = 0; i < survivors.size(); ++i) survivors[i] = i;

  // t_1 = min(S').
  Index t_elem = 0;
  for (Index i = 1; i < survivors.size(); ++i)
    if (precedes(i, t_elem, oracle.compare(i, t_elem))) t_elem = i;
  std::uint64_t removed_sum = 0;
  std::uint64_t removed_equal_t = 0;  // removed sizes equal to the current t
  record(sizes[t_elem].rank, 0, survivors.size());

  while (survivors.size() > 1) {
    const std::size_t k = survivors.size() / 2 + 1;
    Execution sel("select", [&](Probe& p) -> Task<Outcome> {
      return [](Probe& p, std::vector<Index> items, std::size_t k, Index* out) -> Task<Outcome> {
        *out = co_await select_kth(p, std::move(items), k);
        co_return Outcome::GaveUp;
      }(p, survivors, k, &t_elem);
    }, WitnessPolicy::none());
    const Index prev_t = t_elem;
    while (auto req = sel.next()) sel.answer(oracle.compare(req->x, req->y));
    const Index pivot = t_elem;

    std::vector<Index> kept{pivot};
    std::uint64_t batch_equal = 0;
    bool prev_equal = false;
    for (Index x : survivors) {
      if (x == pivot) continue;
      const Order o = oracle.compare(x, pivot);
      if (precedes(x, pivot, o)) {
        removed_sum += sizes[x].rank;
        if (o == Order::Equal) ++batch_equal;
        if (x == prev_t) prev_equal = o == Order::Equal;
      } else {
        kept.push_back(x);
      }
    }
    removed_equal_t = (prev_equal ? removed_equal_t : 0) + batch_equal;
    survivors = std::move(kept);
    const std::uint64_t t = sizes[pivot].rank;
    record(t, removed_sum - t * removed_equal_t, survivors.size() + removed_equal_t);
  }
  result.size_comparisons = oracle.count();
  return result;
}

struct ReducedProfile {
  ClusterProfile profile;
  std::uint64_t n_reduced = 0;
  std::uint64_t last_deleted = 0;  // size of the smallest deleted cluster
};

/// G': delete a largest cluster while more than 3n/4 vertices remain.
inline ReducedProfile derive_reduced(const ClusterProfile& profile) {
  if (profile.m() < 2) throw UsageError("at least two clusters required");
  auto sizes = profile.sorted_sizes();
  std::uint64_t remaining = profile.n();
  std::uint64_t last = 0;
  while (4 * remaining > 3 * profile.n()) {
    last = sizes.back();
    remaining -= last;
    sizes.pop_back();
  }
  return {ClusterProfile(std::move(sizes)), remaining, last};
}

/// min over {L >= 1 : C(L) < n} of (C(L) + D(L)) * max(1, log2 D(L)).
inline double block_objective_below_n(const StepFunctions& f) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : f.segments())
    if (seg.c < f.n()) best = std::min(best, block_objective(seg.c, seg.d));
  return best;
}

/// min(n'/8, (1/32) * min over {L >= 1 : C'(L) < n'} of the block objective of G'):
/// the number of rounds the reconstruction argument can absorb.
inline double reduced_budget(const ClusterProfile& profile) {
  const auto red = derive_reduced(profile);
  const double objective = block_objective_below_n(StepFunctions(red.profile));
  return std::min(static_cast<double>(red.n_reduced) / 8.0, objective / 32.0);
}

/// min over {L >= 2 : C(L) < n} of (1/4) C(L) max(0, log2(C(L)/(2L))); 0 if empty.
inline double lower_bound_median(const ClusterProfile& profile) {
  const StepFunctions f(profile);
  std::optional<double> best;
  for (const auto& seg : f.segments()) {
    if (seg.c >= f.n() || seg.hi < 2) continue;
    const double v = median_lower_term(seg.c, seg.hi);
    if (!best || v < *best) best = v;
  }
  return best.value_or(0.0);
}

inline double lower_bound_block(const ClusterProfile& profile) {
  const double b2 = select_L2(profile).bound;
  return std::min(static_cast<double>(profile.n()), b2) / 1000.0;
}

inline double lower_bound_combined(const ClusterProfile& profile) {
  const StepFunctions f(profile);
  double inner = select_L2(f).bound;
  if (auto l1 = select_L1(f)) inner = std::min(inner, l1->bound);
  return inner / 1000.0;
}

struct LowerBounds {
  double median = 0.0;
  double block = 0.0;
  double combined = 0.0;
};

inline LowerBounds lower_bounds(const ClusterProfile& profile) {
  return {lower_bound_median(profile), lower_bound_block(profile), lower_bound_combined(profile)};
}

/// The linear-subset inequality between G and G', evaluated exactly.
inline bool check_linear_subset(const ClusterProfile& profile) {
  const double lhs = reduced_budget(profile);
  const double rhs = std::min(static_cast<double>(profile.n()), select_L2(profile).bound) / 1000.0;
  return lhs >= rhs;
}

}  // namespace edlab
