#pragma once

// Set intersection over a combined index space: A occupies [0, |A|), B follows.
// Only A-B equalities are witnesses (WitnessPolicy::cross(|A|)); A-A and B-B
// ties are ordinary answers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "edlab/core.hpp"
#include "edlab/distinctness.hpp"
#include "edlab/errors.hpp"
#include "edlab/probe.hpp"
#include "edlab/sorting.hpp"

namespace edlab {

struct SIInstance {
  Instance a;
  Instance b;

  std::size_t size_a() const noexcept { return a.size(); }
  std::size_t size_b() const noexcept { return b.size(); }

  Instance combined() const {
    std::vector<Value> v(a.values());
    v.insert(v.end(), b.values().begin(), b.values().end());
    return Instance(std::move(v));
  }
  WitnessPolicy policy() const { return WitnessPolicy::cross(static_cast<Index>(a.size())); }
};

struct BipartiteCluster {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  friend auto operator<=>(const BipartiteCluster&, const BipartiteCluster&) = default;
};

class BipartiteProfile {
 public:
  BipartiteProfile() = default;
  explicit BipartiteProfile(std::vector<BipartiteCluster> clusters) : clusters_(std::move(clusters)) {
    for (const auto& c : clusters_) {
      if (c.a == 0 && c.b == 0) throw UsageError("bipartite cluster needs an A or a B element");
      n_a_ += c.a;
      n_b_ += c.b;
    }
  }

  const std::vector<BipartiteCluster>& clusters() const noexcept { return clusters_; }
  std::uint64_t n_a() const noexcept { return n_a_; }
  std::uint64_t n_b() const noexcept { return n_b_; }

  friend bool operator==(const BipartiteProfile& x, const BipartiteProfile& y) {
    auto p = x.clusters_, q = y.clusters_;
    std::sort(p.begin(), p.end());
    std::sort(q.begin(), q.end());
    return p == q;
  }

 private:
  std::vector<BipartiteCluster> clusters_;
  std::uint64_t n_a_ = 0;
  std::uint64_t n_b_ = 0;
};

inline BipartiteProfile bipartite_profile_of(const SIInstance& inst) {
  std::map<std::uint64_t, BipartiteCluster> by_rank;
  for (auto v : inst.a.values()) ++by_rank[v.rank].a;
  for (auto v : inst.b.values()) ++by_rank[v.rank].b;
  std::vector<BipartiteCluster> out;
  for (auto& [rank, c] : by_rank) out.push_back(c);
  return BipartiteProfile(std::move(out));
}

/// Cube root of n when n = 2^(3t), t >= 1.
inline std::uint64_t si_cube_root(std::uint64_t n) {
  for (unsigned t = 1; 3 * t < 64; ++t) {
    if (n == (std::uint64_t{1} << (3 * t))) return std::uint64_t{1} << t;
  }
  throw UsageError("si_family needs n = 2^(3t) with t >= 1");
}

/// Clusters (j, [j = i]) for j = 1..r, n - 1 clusters (0, 1), and one
/// A-only cluster holding the remaining n - r(r+1)/2 A-elements; r = n^(1/3).
/// The big cluster comes first.
inline BipartiteProfile si_family(std::uint64_t n, std::uint64_t i) {
  const std::uint64_t r = si_cube_root(n);
  if (i < 1 || i > r) throw UsageError("si_family: i must lie in [1, n^(1/3)]");
  std::vector<BipartiteCluster> c;
  c.reserve(r + n + 1);
  c.push_back({n - r * (r + 1) / 2, 0});
  for (std::uint64_t j = 1; j <= r; ++j) c.push_back({j, j == i ? 1u : 0u});
  for (std::uint64_t k = 0; k + 1 < n; ++k) c.push_back({0, 1});
  return BipartiteProfile(std::move(c));
}

/// Seeded realization. Cluster ranks follow the cluster order of the profile
/// (so the first cluster holds the smallest values); positions within A and
/// within B are shuffled.
inline SIInstance realize_si(const BipartiteProfile& profile, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Value> a, b;
  for (std::size_t c = 0; c < profile.clusters().size(); ++c) {
    for (std::uint64_t k = 0; k < profile.clusters()[c].a; ++k) a.push_back(Value{c});
    for (std::uint64_t k = 0; k < profile.clusters()[c].b; ++k) b.push_back(Value{c});
  }
  std::shuffle(a.begin(), a.end(), rng);
  std::shuffle(b.begin(), b.end(), rng);
  return {Instance(std::move(a)), Instance(std::move(b))};
}

/// k = 2, 4, ...: jointly sort the first min(|A|, k) A-indices and the first
/// min(|B|, k) B-indices. The round with k >= max(|A|, |B|) certifies disjointness.
inline Task<Outcome> si_doubling(Probe& probe, std::size_t na, std::size_t nb) {
  if (na < 1 || nb < 1) throw UsageError("set intersection needs non-empty A and B");
  for (std::uint64_t k = 2;; k *= 2) {
    std::vector<Index> items;
    for (Index x = 0; x < std::min<std::uint64_t>(na, k); ++x) items.push_back(x);
    for (Index y = 0; y < std::min<std::uint64_t>(nb, k); ++y) items.push_back(static_cast<Index>(na) + y);
    ++probe.diagnostics().iterations;
    co_await merge_sort(probe, items);
    if (k >= std::max(na, nb)) co_return Outcome::Distinct;
  }
}

inline Algorithm si_doubling_algorithm(std::size_t na, std::size_t nb) {
  return [na, nb](Probe& p) { return si_doubling(p, na, nb); };
}

/// Clairvoyant algorithm for si_family(n, i): strip the big A-cluster at the
/// median of A, sort the remaining A-elements, find the run of length i, and
/// scan B against one of its elements.
inline Task<Outcome> si_clairvoyant(Probe& probe, std::size_t na, std::size_t nb, std::uint64_t i) {
  if (na < 1 || nb < 1) throw UsageError("set intersection needs non-empty A and B");
  std::vector<Index> a = iota_indices(na);
  const Index median = co_await select_kth(probe, a, (na + 1) / 2);
  std::vector<Index> rest;
  for (Index x : a) {
    if (x == median) continue;
    const Order o = co_await probe.compare(x, median);
    if (o != Order::Equal) rest.push_back(x);
  }
  co_await merge_sort(probe, rest);

  std::optional<Index> representative;
  std::size_t run_start = 0;
  for (std::size_t p = 1; p <= rest.size(); ++p) {
    bool boundary = p == rest.size();
    if (!boundary) {
      const Order o = co_await probe.compare(rest[p - 1], rest[p]);
      boundary = o != Order::Equal;
    }
    if (boundary) {
      if (p - run_start == i) {
        representative = rest[run_start];
        break;
      }
      run_start = p;
    }
  }
  if (!representative) co_return Outcome::GaveUp;

  for (std::size_t y = 0; y < nb; ++y) co_await probe.compare(*representative, static_cast<Index>(na + y));
  co_return Outcome::GaveUp;
}

inline Algorithm si_clairvoyant_algorithm(std::size_t na, std::size_t nb, std::uint64_t i) {
  return [na, nb, i](Probe& p) { return si_clairvoyant(p, na, nb, i); };
}

inline RunReport run_si(const SIInstance& inst, const Algorithm& algorithm) {
  const Instance joint = inst.combined();
  CountingOracle oracle(joint);
  return run(oracle, algorithm, inst.policy());
}

}  // namespace edlab
