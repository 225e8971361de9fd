#pragma once

// Opaque ordered values, instances, the comparison-counting oracle and
// transcript replay. The oracle is the only place where realized values are
// inspected; algorithms see indices and three-way answers.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "edlab/cluster_profile.hpp"
#include "edlab/errors.hpp"

namespace edlab {

using Index = std::uint32_t;

enum class Order : std::int8_t { Less = -1, Equal = 0, Greater = 1 };

constexpr Order flip(Order o) noexcept { return static_cast<Order>(-static_cast<int>(o)); }

constexpr char order_symbol(Order o) noexcept {
  switch (o) {
    case Order::Less: return '<';
    case Order::Equal: return '=';
    case Order::Greater: return '>';
  }
  return '?';
}

inline Order order_from_symbol(char c) {
  switch (c) {
    case '<': return Order::Less;
    case '=': return Order::Equal;
    case '>': return Order::Greater;
    default: throw UsageError(std::string("bad comparison symbol '") + c + "'");
  }
}

/// Position of an element in the realized total order. Equal ranks are duplicates.
struct Value {
  std::uint64_t rank = 0;
};

inline Order three_way(Value a, Value b) noexcept {
  if (a.rank < b.rank) return Order::Less;
  if (a.rank > b.rank) return Order::Greater;
  return Order::Equal;
}

class Instance {
 public:
  Instance() = default;
  explicit Instance(std::vector<Value> values) : values_(std::move(values)) {}

  static Instance from_ranks(const std::vector<std::uint64_t>& ranks) {
    std::vector<Value> v;
    v.reserve(ranks.size());
    for (auto r : ranks) v.push_back(Value{r});
    return Instance(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const Value& operator[](Index i) const { return values_.at(i); }
  const std::vector<Value>& values() const noexcept { return values_; }

  std::vector<std::uint64_t> ranks() const {
    std::vector<std::uint64_t> r;
    r.reserve(values_.size());
    for (auto v : values_) r.push_back(v.rank);
    return r;
  }

 private:
  std::vector<Value> values_;
};

struct TranscriptEntry {
  Index x = 0;
  Index y = 0;
  Order answer = Order::Equal;
  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

using Transcript = std::vector<TranscriptEntry>;

/// Answers comparisons on behalf of an adaptive adversary instead of an instance.
using AnswerHook = std::function<Order(Index, Index)>;

/// The single comparison gateway. Counts every comparison and keeps the transcript.
class CountingOracle {
 public:
  explicit CountingOracle(const Instance& instance) : instance_(&instance), n_(instance.size()) {}
  CountingOracle(std::size_t n, AnswerHook hook) : n_(n), hook_(std::move(hook)) {}

  Order compare(Index x, Index y) {
    if (x >= n_ || y >= n_) throw UsageError("comparison index out of range");
    if (x == y) throw UsageError("self-comparison is not allowed");
    const Order answer = hook_ ? hook_(x, y) : three_way((*instance_)[x], (*instance_)[y]);
    transcript_.push_back({x, y, answer});
    return answer;
  }

  std::uint64_t count() const noexcept { return transcript_.size(); }
  std::size_t size() const noexcept { return n_; }
  const Transcript& transcript() const noexcept { return transcript_; }
  bool adversarial() const noexcept { return static_cast<bool>(hook_); }

 private:
  const Instance* instance_ = nullptr;
  std::size_t n_ = 0;
  AnswerHook hook_;
  Transcript transcript_;
};

struct Witness {
  Index x = 0;
  Index y = 0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Outcome { Duplicate, Distinct, GaveUp };

inline const char* outcome_name(Outcome o) noexcept {
  switch (o) {
    case Outcome::Duplicate: return "duplicate";
    case Outcome::Distinct: return "distinct";
    case Outcome::GaveUp: return "gave_up";
  }
  return "?";
}

/// Instrumentation counters that algorithms update while they run.
struct Diagnostics {
  std::uint64_t iterations = 0;   // block sorting passes, doubling rounds
  std::uint64_t small_calls = 0;  // median recursion calls with |I| < L
  std::uint64_t small_mass = 0;   // total size of those calls
  std::uint64_t scheduler_rounds = 0;
  std::map<std::string, std::uint64_t> branch_costs;
};

struct RunReport {
  Outcome outcome = Outcome::GaveUp;
  std::optional<Witness> witness;
  std::uint64_t comparisons = 0;
  std::map<std::string, std::uint64_t> branch_costs;
  Diagnostics diagnostics;
};

/// Multiset of equality-class sizes of an instance.
inline ClusterProfile profile_of(const Instance& instance) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto v : instance.values()) ++counts[v.rank];
  std::vector<std::uint64_t> sizes;
  sizes.reserve(counts.size());
  for (auto [rank, c] : counts) sizes.push_back(c);
  return ClusterProfile(std::move(sizes));
}

/// Instance whose duplicate graph is isomorphic to `profile`. Cluster values are
/// m distinct ranks in a seeded order; positions are a seeded permutation.
inline Instance realize_instance(const ClusterProfile& profile, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> cluster_rank(profile.m());
  std::iota(cluster_rank.begin(), cluster_rank.end(), 0);
  std::shuffle(cluster_rank.begin(), cluster_rank.end(), rng);

  std::vector<Value> values;
  values.reserve(profile.n());
  for (std::size_t c = 0; c < profile.m(); ++c)
    for (std::uint64_t k = 0; k < profile.sizes()[c]; ++k) values.push_back(Value{cluster_rank[c]});
  std::shuffle(values.begin(), values.end(), rng);
  return Instance(std::move(values));
}

inline bool verify_graph(const Instance& instance, const ClusterProfile& profile) {
  if (instance.size() == 0) return false;
  return profile_of(instance) == profile;
}

inline bool replay_transcript(const Instance& instance, const Transcript& transcript) {
  for (const auto& e : transcript) {
    if (e.x >= instance.size() || e.y >= instance.size()) return false;
    if (three_way(instance[e.x], instance[e.y]) != e.answer) return false;
  }
  return true;
}

}  // namespace edlab
