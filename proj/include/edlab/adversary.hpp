#pragma once

// Binary-tree adversary. Every element sits at a node of an implicit infinite
// binary tree, given by its root path. An answer is always the lexicographic
// order of the two paths at their first difference; when the paths do not yet
// differ, the adversary pushes one or both elements one level down so that
// they do. Realization later sends every cluster to its own leaf below all of
// its members, so the final values agree with every answer given.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "edlab/core.hpp"
#include "edlab/distinctness.hpp"
#include "edlab/errors.hpp"
#include "edlab/probe.hpp"
#include "edlab/profiles.hpp"
#include "edlab/set_intersection.hpp"

namespace edlab {

// -------------------------------------------------------------------- paths

class TreePath {
 public:
  TreePath() = default;

  static TreePath from_string(std::string_view bits) {
    TreePath p;
    for (char c : bits) {
      if (c != '0' && c != '1') throw UsageError("tree path must be a 0/1 string");
      p.push_back(c == '1');
    }
    return p;
  }

  /// The low `width` bits of `value`, most significant first.
  static TreePath from_bits(std::uint64_t value, unsigned width) {
    TreePath p;
    for (unsigned k = width; k-- > 0;) p.push_back((value >> k) & 1u);
    return p;
  }

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (words_[i / 64] >> (63 - i % 64)) & 1u; }

  void push_back(bool bit) {
    if (len_ % 64 == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (63 - len_ % 64);
    ++len_;
  }

  void append(const TreePath& other) {
    for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
  }

  /// Length of the longest common prefix.
  friend std::size_t common_prefix(const TreePath& a, const TreePath& b) noexcept {
    const std::size_t limit = std::min(a.len_, b.len_);
    const std::size_t words = (limit + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t diff = a.words_[w] ^ b.words_[w];
      if (diff) return std::min(limit, w * 64 + static_cast<std::size_t>(std::countl_zero(diff)));
    }
    return limit;
  }

  bool is_prefix_of(const TreePath& other) const noexcept {
    return len_ <= other.len_ && common_prefix(*this, other) == len_;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(len_);
    for (std::size_t i = 0; i < len_; ++i) s.push_back((*this)[i] ? '1' : '0');
    return s;
  }

  friend bool operator==(const TreePath& a, const TreePath& b) noexcept {
    return a.len_ == b.len_ && a.words_ == b.words_;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t len_ = 0;
};

/// A node (finite path) or a fixed leaf (head followed by the tail bit forever).
struct Position {
  TreePath head;
  std::optional<bool> tail;

  bool is_leaf() const noexcept { return tail.has_value(); }
  std::optional<bool> bit(std::size_t i) const noexcept {
    if (i < head.size()) return head[i];
    return tail;
  }
};

/// Lexicographic order of two leaves (eventually constant infinite strings).
inline Order compare_leaves(const Position& a, const Position& b) {
  if (!a.is_leaf() || !b.is_leaf()) throw UsageError("compare_leaves needs leaves");
  const std::size_t d = common_prefix(a.head, b.head);
  const std::size_t stop = std::max(a.head.size(), b.head.size()) + 1;
  for (std::size_t i = std::min(d, std::min(a.head.size(), b.head.size())); i < stop; ++i) {
    const bool x = *a.bit(i), y = *b.bit(i);
    if (x != y) return x ? Order::Greater : Order::Less;
  }
  return Order::Equal;
}

// ---------------------------------------------------------------- adversary

class TreeAdversary {
 public:
  explicit TreeAdversary(std::size_t n) : pos_(n) {}

  std::size_t size() const noexcept { return pos_.size(); }
  const Position& position(Index i) const { return pos_.at(i); }
  const std::vector<Position>& positions() const noexcept { return pos_; }
  std::uint64_t rounds() const noexcept { return rounds_; }
  std::uint64_t total_depth() const noexcept { return total_depth_; }
  std::uint64_t depth(Index i) const { return pos_.at(i).head.size(); }

  /// Fixes element i at a leaf; it never moves afterwards.
  void place_leaf(Index i, TreePath head, bool tail) {
    auto& p = pos_.at(i);
    total_depth_ -= p.head.size();
    p.head = std::move(head);
    p.tail = tail;
    total_depth_ += p.head.size();
  }

  Order answer(Index x, Index y) {
    if (x == y) throw UsageError("self-comparison is not allowed");
    ++rounds_;
    Position& px = pos_.at(x);
    Position& py = pos_.at(y);
    const std::size_t d = common_prefix(px.head, py.head);
    if (d < std::min(px.head.size(), py.head.size())) return px.head[d] ? Order::Greater : Order::Less;
    const std::size_t horizon = std::max(px.head.size(), py.head.size());
    for (std::size_t i = d;; ++i) {
      const auto bx = px.bit(i), by = py.bit(i);
      if (!bx && !by) {
        push(px, false);
        push(py, true);
        return Order::Less;
      }
      if (!bx) {
        push(px, !*by);
        return *by ? Order::Less : Order::Greater;
      }
      if (!by) {
        push(py, !*bx);
        return *bx ? Order::Greater : Order::Less;
      }
      if (*bx != *by) return *bx ? Order::Greater : Order::Less;
      if (i >= horizon) return Order::Equal;  // two leaves with the same tail
    }
  }

  AnswerHook hook() {
    return [this](Index x, Index y) { return answer(x, y); };
  }

 private:
  void push(Position& p, bool bit) {
    if (p.is_leaf()) throw InternalError("a leaf cannot move");
    p.head.push_back(bit);
    ++total_depth_;
  }

  std::vector<Position> pos_;
  std::uint64_t rounds_ = 0;
  std::uint64_t total_depth_ = 0;
};

// --------------------------------------------------------------------- games

/// An algorithm playing against a TreeAdversary, advanced in phases.
class Game {
 public:
  Game(std::size_t n, const Algorithm& algorithm, WitnessPolicy policy = WitnessPolicy::any(),
       std::unique_ptr<TreeAdversary> adversary = nullptr)
      : adversary_(adversary ? std::move(adversary) : std::make_unique<TreeAdversary>(n)),
        oracle_(std::make_unique<CountingOracle>(n, adversary_->hook())),
        exec_(std::make_unique<Execution>("game", algorithm, policy)) {
    if (adversary_->size() != n) throw UsageError("adversary size does not match n");
  }

  /// Answers comparisons until `rounds` have been played in total or the
  /// algorithm stops. A witness would mean the adversary answered EQ across
  /// clusters it promised to keep apart; that is a bug.
  void play_until(std::uint64_t rounds) {
    while (oracle_->count() < rounds) {
      const auto req = exec_->next();
      if (!req) return;
      if (exec_->answer(oracle_->compare(req->x, req->y))) throw InternalError("adversary conceded a witness");
    }
  }

  std::uint64_t rounds() const noexcept { return oracle_->count(); }
  /// The algorithm stopped on its own (Distinct or GaveUp) before the budget ran out.
  bool halted() const noexcept { return exec_->finished(); }
  Outcome outcome() const noexcept { return exec_->outcome(); }
  const TreeAdversary& adversary() const noexcept { return *adversary_; }
  const Transcript& transcript() const noexcept { return oracle_->transcript(); }

 private:
  std::unique_ptr<TreeAdversary> adversary_;
  std::unique_ptr<CountingOracle> oracle_;
  std::unique_ptr<Execution> exec_;
};

struct GameState {
  TreeAdversary adversary;
  Transcript transcript;
  bool halted = false;
  Outcome outcome = Outcome::GaveUp;
};

inline GameState play_game(const Algorithm& algorithm, std::size_t n, std::uint64_t rounds) {
  Game g(n, algorithm);
  g.play_until(rounds);
  return {g.adversary(), g.transcript(), g.halted(), g.outcome()};
}

inline double log2_log2(std::uint64_t n) { return std::log2(std::log2(static_cast<double>(n))); }

/// floor(n log2 log2 n / 8).
inline std::uint64_t few_deep_budget(std::uint64_t n) {
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * log2_log2(n) / 8.0));
}

/// Smallest i in [floor(lglg n / 2), floor(lglg n)] with fewer than n / 2^i
/// elements of depth at least 2^i.
inline unsigned few_deep_index(const TreeAdversary& adv, std::uint64_t n) {
  const double lglg = log2_log2(n);
  const auto lo = static_cast<unsigned>(std::floor(lglg / 2));
  const auto hi = static_cast<unsigned>(std::floor(lglg));
  for (unsigned i = lo; i <= hi; ++i) {
    const std::uint64_t threshold = std::uint64_t{1} << std::min(63u, 1u << i);
    std::uint64_t deep = 0;
    for (Index x = 0; x < adv.size(); ++x)
      if (adv.depth(x) >= threshold) ++deep;
    if ((deep << i) < n) return i;
  }
  throw InternalError("no index with few deep elements");
}

// ------------------------------------------------------------------ packing

/// Element -> cluster assignment. Cluster c has sizes[c] members.
struct Assignment {
  std::vector<std::uint32_t> cluster_of;
  std::vector<std::uint64_t> sizes;

  ClusterProfile profile() const { return ClusterProfile(sizes); }
};

/// Trie over the positions of not-yet-assigned elements. best(v) is the largest
/// number of unassigned elements on one downward chain starting at v.
class PositionTrie {
 public:
  explicit PositionTrie(const std::vector<Position>& positions) {
    nodes_.emplace_back();
    for (Index x = 0; x < positions.size(); ++x) {
      const auto& p = positions[x];
      if (p.is_leaf()) throw UsageError("packing needs unfixed positions");
      std::uint32_t v = 0;
      for (std::size_t i = 0; i < p.head.size(); ++i) {
        const int b = p.head[i];
        if (nodes_[v].child[b] == kNone) {
          nodes_[v].child[b] = static_cast<std::uint32_t>(nodes_.size());
          Node c;
          c.parent = v;
          c.depth = nodes_[v].depth + 1;
          nodes_.push_back(c);
        }
        v = nodes_[v].child[b];
      }
      nodes_[v].elems.push_back(x);
    }
    for (std::size_t v = nodes_.size(); v-- > 0;) refresh(static_cast<std::uint32_t>(v));
  }

  std::uint64_t best() const noexcept { return nodes_[0].best; }
  std::uint64_t remaining(std::uint32_t v) const { return nodes_[v].elems.size() - nodes_[v].next; }
  std::uint32_t depth(std::uint32_t v) const { return nodes_[v].depth; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Takes `count` unassigned elements along the fullest chain, shallowest first.
  std::vector<Index> take_chain(std::uint64_t count) {
    if (count > best()) throw InternalError("no chain holds enough unassigned elements");
    std::vector<Index> out;
    std::uint32_t v = 0, last = 0;
    while (out.size() < count) {
      while (remaining(v) > 0 && out.size() < count) out.push_back(take_one(v));
      last = v;
      const auto& n = nodes_[v];
      const std::uint64_t b0 = n.child[0] == kNone ? 0 : nodes_[n.child[0]].best;
      const std::uint64_t b1 = n.child[1] == kNone ? 0 : nodes_[n.child[1]].best;
      if (out.size() < count) v = b1 > b0 ? n.child[1] : n.child[0];
    }
    update_upward(last);
    return out;
  }

  /// Takes up to `count` unassigned elements stored exactly at node v.
  std::vector<Index> take_at(std::uint32_t v, std::uint64_t count) {
    std::vector<Index> out;
    while (remaining(v) > 0 && out.size() < count) out.push_back(take_one(v));
    update_upward(v);
    return out;
  }

  /// Occupied non-root nodes ordered by (depth, node id).
  std::set<std::pair<std::uint32_t, std::uint32_t>> occupied_non_root() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> s;
    for (std::uint32_t v = 1; v < nodes_.size(); ++v)
      if (remaining(v) > 0) s.insert({nodes_[v].depth, v});
    return s;
  }

  static constexpr std::uint32_t kRoot = 0;

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t child[2] = {kNone, kNone};
    std::uint32_t parent = kNone;
    std::uint32_t depth = 0;
    std::uint64_t best = 0;
    std::vector<Index> elems;
    std::size_t next = 0;
  };

  Index take_one(std::uint32_t v) { return nodes_[v].elems[nodes_[v].next++]; }

  void refresh(std::uint32_t v) {
    auto& n = nodes_[v];
    std::uint64_t below = 0;
    for (auto c : n.child)
      if (c != kNone) below = std::max(below, nodes_[c].best);
    n.best = remaining(v) + below;
  }

  void update_upward(std::uint32_t v) {
    while (true) {
      refresh(v);
      if (v == kRoot) return;
      v = nodes_[v].parent;
    }
  }

  std::vector<Node> nodes_;
};

/// Packs the target profile into chains, largest clusters first.
inline Assignment pack_isomorphic(const TreeAdversary& adv, const ClusterProfile& profile) {
  if (profile.n() != adv.size()) throw UsageError("profile size does not match the game");
  PositionTrie trie(adv.positions());
  auto sizes = profile.sorted_sizes();
  std::reverse(sizes.begin(), sizes.end());
  Assignment out{std::vector<std::uint32_t>(adv.size()), sizes};
  for (std::uint32_t c = 0; c < sizes.size(); ++c) {
    if (trie.best() < sizes[c]) throw InternalError("isomorphic packing found no chain for a cluster");
    for (Index x : trie.take_chain(sizes[c])) out.cluster_of[x] = c;
  }
  return out;
}

/// Clusters of size exactly L while some chain still holds L unassigned
/// elements; everything left becomes a singleton.
inline Assignment pack_greedy(const TreeAdversary& adv, std::uint64_t L) {
  if (L < 1) throw UsageError("pack_greedy needs L >= 1");
  PositionTrie trie(adv.positions());
  Assignment out{std::vector<std::uint32_t>(adv.size()), {}};
  std::vector<bool> used(adv.size(), false);
  while (trie.best() >= L && L > 1) {
    const auto c = static_cast<std::uint32_t>(out.sizes.size());
    for (Index x : trie.take_chain(L)) {
      out.cluster_of[x] = c;
      used[x] = true;
    }
    out.sizes.push_back(L);
  }
  for (Index x = 0; x < adv.size(); ++x) {
    if (used[x]) continue;
    out.cluster_of[x] = static_cast<std::uint32_t>(out.sizes.size());
    out.sizes.push_back(1);
  }
  return out;
}

struct Reconstruction {
  Assignment assignment;
  bool complete = false;               // every element assigned
  std::size_t reduced_clusters_formed = 0;
  std::uint64_t leftover_non_root = 0;  // non-root elements left once G' was formed
};

/// Forms the clusters of G' in decreasing size, each around a shallowest
/// occupied non-root node and topped up with root elements; once the non-root
/// elements are used up, the remaining clusters of the full profile come from
/// root elements only.
inline Reconstruction reconstruct(const TreeAdversary& adv, const ClusterProfile& profile) {
  if (profile.n() != adv.size()) throw UsageError("profile size does not match the game");
  const auto reduced = derive_reduced(profile);
  auto g_sizes = reduced.profile.sorted_sizes();
  std::reverse(g_sizes.begin(), g_sizes.end());

  PositionTrie trie(adv.positions());
  auto occupied = trie.occupied_non_root();
  Reconstruction rec;
  rec.assignment.cluster_of.assign(adv.size(), std::numeric_limits<std::uint32_t>::max());

  // Clusters still to form, as a multiset of sizes of the full profile.
  std::multiset<std::uint64_t> pending(profile.sizes().begin(), profile.sizes().end());
  auto assign = [&](const std::vector<Index>& members) {
    const auto c = static_cast<std::uint32_t>(rec.assignment.sizes.size());
    for (Index x : members) rec.assignment.cluster_of[x] = c;
    rec.assignment.sizes.push_back(members.size());
    pending.erase(pending.find(members.size()));
  };

  for (std::uint64_t size : g_sizes) {
    if (occupied.empty()) break;
    const auto [depth, v] = *occupied.begin();
    std::vector<Index> members = trie.take_at(v, size);
    if (trie.remaining(v) == 0) occupied.erase(occupied.begin());
    const auto top_up = trie.take_at(PositionTrie::kRoot, size - members.size());
    if (members.size() + top_up.size() != size) {
      rec.leftover_non_root = members.size();
      for (const auto& [d, u] : occupied) rec.leftover_non_root += trie.remaining(u);
      return rec;
    }
    members.insert(members.end(), top_up.begin(), top_up.end());
    assign(members);
    ++rec.reduced_clusters_formed;
  }

  for (const auto& [depth, v] : occupied) rec.leftover_non_root += trie.remaining(v);
  if (rec.leftover_non_root > 0) return rec;

  const std::vector<std::uint64_t> rest(pending.rbegin(), pending.rend());
  for (std::uint64_t size : rest) {
    const auto members = trie.take_at(PositionTrie::kRoot, size);
    if (members.size() != size) throw InternalError("root elements exhausted");
    assign(members);
  }
  rec.complete = true;
  return rec;
}

// -------------------------------------------------------------- realization

inline unsigned bit_width_for(std::uint64_t count) {
  return count <= 1 ? 0u : static_cast<unsigned>(std::bit_width(count - 1));
}

/// Ranks of leaves in lexicographic order; equal leaves share a rank.
inline std::vector<std::uint64_t> rank_leaves(const std::vector<Position>& leaves) {
  std::vector<std::size_t> order(leaves.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_leaves(leaves[a], leaves[b]) == Order::Less;
  });
  std::vector<std::uint64_t> rank(leaves.size());
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && compare_leaves(leaves[order[k - 1]], leaves[order[k]]) != Order::Equal) ++r;
    rank[order[k]] = r;
  }
  return rank;
}

/// Sends every cluster to a fresh leaf below its deepest member: the member's
/// path, the cluster number in fixed width, a 1, then zeros.
inline Instance realize(const TreeAdversary& adv, const Assignment& assignment) {
  const std::size_t n = adv.size();
  if (assignment.cluster_of.size() != n) throw UsageError("assignment does not cover every element");
  const std::size_t clusters = assignment.sizes.size();
  std::vector<std::optional<Index>> deepest(clusters);
  std::vector<std::uint64_t> seen(clusters, 0);
  for (Index x = 0; x < n; ++x) {
    const auto c = assignment.cluster_of[x];
    if (c >= clusters) throw UsageError("element assigned to an unknown cluster");
    if (adv.position(x).is_leaf()) throw UsageError("realize expects unfixed positions");
    ++seen[c];
    if (!deepest[c] || adv.depth(x) > adv.depth(*deepest[c])) deepest[c] = x;
  }
  for (std::size_t c = 0; c < clusters; ++c)
    if (seen[c] != assignment.sizes[c]) throw UsageError("cluster sizes do not match the assignment");
  for (Index x = 0; x < n; ++x) {
    const auto& top = adv.position(*deepest[assignment.cluster_of[x]]).head;
    if (!adv.position(x).head.is_prefix_of(top)) throw UsageError("cluster members do not share a root path");
  }

  const unsigned width = bit_width_for(clusters);
  std::vector<Position> leaves(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    if (!deepest[c]) continue;
    leaves[c].head = adv.position(*deepest[c]).head;
    leaves[c].head.append(TreePath::from_bits(c, width));
    leaves[c].head.push_back(true);
    leaves[c].tail = false;
  }
  const auto rank = rank_leaves(leaves);
  std::vector<Value> values(n);
  for (Index x = 0; x < n; ++x) values[x] = Value{rank[assignment.cluster_of[x]]};
  return Instance(std::move(values));
}

// --------------------------------------------------------------- pipelines

struct GameReport {
  std::uint64_t rounds = 0;
  bool halted = false;
  Outcome outcome = Outcome::GaveUp;
  Instance realized;
  ClusterProfile profile;
  bool consistent = false;  // replay and isomorphism both hold
};

inline GameReport finish_game(const TreeAdversary& adv, const Transcript& transcript, const Assignment& a) {
  GameReport r;
  r.rounds = adv.rounds();
  r.realized = realize(adv, a);
  r.profile = a.profile();
  r.consistent = replay_transcript(r.realized, transcript) && verify_graph(r.realized, r.profile);
  return r;
}

struct SeparationRun {
  std::uint64_t n = 0;
  std::uint64_t rounds = 0;
  bool survived = false;
  unsigned i = 0;
  std::uint64_t L = 0;
  std::uint64_t c_of_L = 0;
  bool c_bound_ok = false;  // C(L) <= n / 2^(i-3)
  bool consistent = false;
  Outcome median_outcome = Outcome::GaveUp;
  std::uint64_t median_comparisons = 0;
  double ratio = 0.0;
  ClusterProfile profile;
};

/// Plays `algorithm` for floor(n lglg n / 8) rounds, picks the few-deep index
/// i, packs clusters of size L = n / 2^(2^(i-1)) along chains, and runs median
/// recursion with that L on the realized instance.
inline SeparationRun separation_run(std::size_t n, const Algorithm& algorithm) {
  SeparationRun s;
  s.n = n;
  Game game(n, algorithm);
  game.play_until(few_deep_budget(n));
  s.rounds = game.rounds();
  s.survived = !game.halted() || game.outcome() != Outcome::Duplicate;
  s.i = few_deep_index(game.adversary(), n);
  s.L = s.i == 0 ? n : (n >> std::min<unsigned>(63, 1u << (s.i - 1)));
  s.L = std::max<std::uint64_t>(s.L, 2);
  const auto assignment = pack_greedy(game.adversary(), s.L);
  const auto report = finish_game(game.adversary(), game.transcript(), assignment);
  s.profile = report.profile;
  s.consistent = report.consistent;
  s.c_of_L = cd(s.profile, s.L).c;
  // C(L) * 2^(i-3) <= n, kept in integers.
  s.c_bound_ok = s.i >= 3 ? (s.c_of_L << (s.i - 3)) <= n : s.c_of_L <= (std::uint64_t{n} << (3 - s.i));
  CountingOracle oracle(report.realized);
  const auto run_report = run(oracle, median_recursion_algorithm(n, s.L));
  s.median_outcome = run_report.outcome;
  s.median_comparisons = run_report.comparisons;
  s.ratio = s.median_comparisons ? static_cast<double>(s.rounds) / static_cast<double>(s.median_comparisons) : 0.0;
  return s;
}

// ---------------------------------------------------------- set intersection

struct SIGame {
  SIInstance instance;
  std::uint64_t j = 0;
  std::uint64_t rounds = 0;
  bool halted = false;
  bool consistent = false;  // replay holds and the instance realizes si_family(n, j)
};

/// ell = log2(n) / 3.
inline unsigned si_ell(std::uint64_t n) { return static_cast<unsigned>(std::countr_zero(si_cube_root(n))); }

/// A-elements are fixed at leaves: the big cluster at 0^inf, the type-(1)
/// cluster j at u_j 1^inf with u_j = j - 1 written in ell bits. B-elements
/// start at the root and are the only ones that move. After floor(n ell / 2)
/// rounds a shallowest B-element x (depth <= ell) joins the cluster j below it;
/// every other B-element becomes a singleton.
inline SIGame si_adversary_game(const Algorithm& algorithm, std::uint64_t n, std::uint64_t seed = 0) {
  const std::uint64_t r = si_cube_root(n);
  const unsigned ell = si_ell(n);
  auto adv = std::make_unique<TreeAdversary>(2 * n);

  std::vector<Index> a_order(n);
  std::iota(a_order.begin(), a_order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(a_order.begin(), a_order.end(), rng);
  std::size_t next = 0;
  for (std::uint64_t j = 1; j <= r; ++j)
    for (std::uint64_t k = 0; k < j; ++k) adv->place_leaf(a_order[next++], TreePath::from_bits(j - 1, ell), true);
  while (next < n) adv->place_leaf(a_order[next++], TreePath{}, false);

  Game game(2 * n, algorithm, WitnessPolicy::cross(static_cast<Index>(n)), std::move(adv));
  game.play_until(n * ell / 2);

  SIGame out;
  out.rounds = game.rounds();
  out.halted = game.halted();
  const TreeAdversary& st = game.adversary();

  Index x = static_cast<Index>(n);
  for (Index b = static_cast<Index>(n); b < 2 * n; ++b)
    if (st.depth(b) < st.depth(x)) x = b;
  if (st.depth(x) > ell) throw InternalError("no B-element within depth ell");
  std::uint64_t u = 0;
  const auto& px = st.position(x).head;
  for (std::size_t k = 0; k < px.size(); ++k) u |= std::uint64_t{px[k]} << (ell - 1 - k);
  out.j = u + 1;

  std::vector<Position> leaves(st.positions());
  const unsigned width = bit_width_for(n);
  for (Index b = static_cast<Index>(n); b < 2 * n; ++b) {
    if (b == x) {
      leaves[b] = Position{TreePath::from_bits(u, ell), true};
      continue;
    }
    leaves[b].head.append(TreePath::from_bits(b - n, width));
    leaves[b].head.push_back(true);
    leaves[b].tail = false;
  }
  const auto rank = rank_leaves(leaves);
  std::vector<Value> a, bvals;
  for (Index k = 0; k < n; ++k) a.push_back(Value{rank[k]});
  for (Index k = static_cast<Index>(n); k < 2 * n; ++k) bvals.push_back(Value{rank[k]});
  out.instance = {Instance(std::move(a)), Instance(std::move(bvals))};
  out.consistent = replay_transcript(out.instance.combined(), game.transcript()) &&
                   bipartite_profile_of(out.instance) == si_family(n, out.j);
  return out;
}

}  // namespace edlab
