#include <gtest/gtest.h>

#include <random>

#include "brute.hpp"
#include "edlab/adversary.hpp"
#include "edlab/oblivious.hpp"

using namespace edlab;

namespace {

/// An opponent that compares random pairs for a fixed number of rounds.
Algorithm random_pairs(std::size_t n, std::uint64_t rounds, std::uint64_t seed) {
  return [=](Probe& p) {
    return [](Probe& p, std::size_t n, std::uint64_t rounds, std::uint64_t seed) -> Task<Outcome> {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<Index> pick(0, static_cast<Index>(n - 1));
      for (std::uint64_t r = 0; r < rounds; ++r) {
        Index x = pick(rng), y = pick(rng);
        if (x == y) y = (x + 1) % n;
        co_await p.compare(x, y);
      }
      co_return Outcome::GaveUp;
    }(p, n, rounds, seed);
  };
}

Algorithm idle() {
  return [](Probe&) { return []() -> Task<Outcome> { co_return Outcome::GaveUp; }(); };
}

std::string lex_key(const TreePath& p) { return p.to_string(); }

}  // namespace

TEST(TreePathTest, PrefixesAcrossWordBoundaries) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    std::string a, b;
    const std::size_t la = rng() % 200, shared = rng() % (la + 1);
    for (std::size_t i = 0; i < la; ++i) a.push_back('0' + rng() % 2);
    b = a.substr(0, shared);
    const std::size_t extra = rng() % 150;
    for (std::size_t i = 0; i < extra; ++i) b.push_back('0' + rng() % 2);
    const auto pa = TreePath::from_string(a), pb = TreePath::from_string(b);
    std::size_t expect = 0;
    while (expect < a.size() && expect < b.size() && a[expect] == b[expect]) ++expect;
    ASSERT_EQ(common_prefix(pa, pb), expect);
    ASSERT_EQ(pa.is_prefix_of(pb), b.compare(0, a.size(), a) == 0 && a.size() <= b.size());
    ASSERT_EQ(pa.to_string(), a);
  }
  EXPECT_THROW(TreePath::from_string("012"), UsageError);
  EXPECT_EQ(TreePath::from_bits(5, 4).to_string(), "0101");
}

TEST(Answer, BothAtRoot) {
  TreeAdversary adv(2);
  EXPECT_EQ(adv.answer(0, 1), Order::Less);
  EXPECT_EQ(adv.position(0).head.to_string(), "0");
  EXPECT_EQ(adv.position(1).head.to_string(), "1");
}

TEST(Answer, PrefixTakesComplementOfNextBit) {
  TreeAdversary adv(3);
  adv.answer(1, 2);  // 1 -> "0", 2 -> "1"
  // x at the root, y at "0": x moves right and is larger.
  EXPECT_EQ(adv.answer(0, 1), Order::Greater);
  EXPECT_EQ(adv.position(0).head.to_string(), "1");
  EXPECT_EQ(adv.answer(1, 0), Order::Less);
}

TEST(Answer, SeparatedPathsDoNotMove) {
  TreeAdversary adv(4);
  adv.answer(0, 1);
  adv.answer(0, 2);  // 0 at "0", 2 at root -> 2 goes to "1"
  adv.answer(0, 3);  // 3 goes to "1"
  adv.answer(2, 3);  // 2 -> "10", 3 -> "11"
  adv.answer(0, 1);  // 0 "0", 1 "1": no movement
  const auto before = adv.total_depth();
  EXPECT_EQ(adv.position(2).head.to_string(), "10");
  EXPECT_EQ(adv.answer(2, 3), Order::Less);
  EXPECT_EQ(adv.total_depth(), before);
}

TEST(Answer, NeverEqualAndConsistentWithFinalPaths) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 30;
    TreeAdversary adv(n);
    Transcript tr;
    for (int r = 0; r < 300; ++r) {
      Index x = rng() % n, y = rng() % n;
      if (x == y) continue;
      const auto before = adv.total_depth();
      const auto dx = adv.depth(x), dy = adv.depth(y);
      const Order o = adv.answer(x, y);
      ASSERT_NE(o, Order::Equal);
      ASSERT_LE(adv.total_depth() - before, 2u);
      ASSERT_LE(adv.depth(x) - dx, 1u);
      ASSERT_LE(adv.depth(y) - dy, 1u);
      // After answering, the two paths diverge.
      const auto& px = adv.position(x).head;
      const auto& py = adv.position(y).head;
      ASSERT_FALSE(px.is_prefix_of(py) || py.is_prefix_of(px));
      tr.push_back({x, y, o});
    }
    // Any leaf extension preserves every recorded answer.
    for (const auto& e : tr) {
      const auto a = lex_key(adv.position(e.x).head), b = lex_key(adv.position(e.y).head);
      EXPECT_EQ(e.answer, a < b ? Order::Less : Order::Greater);
    }
  }
}

TEST(Leaves, TailsDecideOrderAndEquality) {
  const Position zero{TreePath{}, false};
  const Position u1{TreePath::from_string("00"), true};
  const Position b{TreePath::from_string("0001"), false};
  EXPECT_EQ(compare_leaves(zero, u1), Order::Less);
  EXPECT_EQ(compare_leaves(b, u1), Order::Less);
  EXPECT_EQ(compare_leaves(zero, b), Order::Less);
  EXPECT_EQ(compare_leaves(u1, Position{TreePath::from_string("0011"), true}), Order::Equal);
  EXPECT_EQ(compare_leaves(zero, Position{TreePath::from_string("000"), false}), Order::Equal);
}

TEST(PlayGame, ZeroRoundsLeavesEverythingAtRoot) {
  const auto g = play_game(sort_check_algorithm(16), 16, 0);
  for (const auto& p : g.adversary.positions()) EXPECT_TRUE(p.head.empty());
  EXPECT_EQ(g.adversary.rounds(), 0u);
}

TEST(PlayGame, MergeSortCheckerBudget256) {
  EXPECT_EQ(few_deep_budget(256), 96u);
  const auto g = play_game(sort_check_algorithm(256), 256, 96);
  EXPECT_EQ(g.adversary.rounds(), 96u);
  EXPECT_LE(g.adversary.total_depth(), 192u);
  for (const auto& e : g.transcript) EXPECT_NE(e.answer, Order::Equal);
  const unsigned i = few_deep_index(g.adversary, 256);
  EXPECT_GE(i, 1u);
  EXPECT_LE(i, 3u);
}

TEST(PlayGame, HaltingEarlyIsRecorded) {
  const auto g = play_game(sort_check_algorithm(8), 8, 1000);
  EXPECT_TRUE(g.halted);
  EXPECT_EQ(g.outcome, Outcome::Distinct);
  EXPECT_LT(g.transcript.size(), 1000u);
}

TEST(FewDeep, ZeroRoundsGivesLowestIndex) {
  TreeAdversary adv(1u << 12);
  EXPECT_EQ(few_deep_index(adv, 1u << 12), 1u);
  TreeAdversary big(1u << 16);
  EXPECT_EQ(few_deep_index(big, 1u << 16), 2u);
}

TEST(FewDeep, HoldsAcrossOpponents) {
  const std::size_t n = 1u << 12;
  std::vector<Algorithm> opponents{sort_check_algorithm(n), order_doubling_algorithm(n), oblivious_algorithm(n),
                                   median_recursion_algorithm(n, 2), block_sorting_algorithm(n, 16),
                                   random_pairs(n, 1u << 20, 4)};
  for (const auto& a : opponents) {
    const auto g = play_game(a, n, few_deep_budget(n));
    EXPECT_NO_THROW(few_deep_index(g.adversary, n));
  }
}

TEST(PackIsomorphic, ZeroRounds) {
  const ClusterProfile p({5, 3, 1, 1});
  TreeAdversary adv(p.n());
  const auto a = pack_isomorphic(adv, p);
  const auto inst = realize(adv, a);
  EXPECT_TRUE(verify_graph(inst, p));
}

TEST(PackIsomorphic, ShortGamesOnTwoPlusSingletons) {
  std::vector<std::uint64_t> sizes(16, 1);
  sizes.push_back(2);
  const ClusterProfile p(sizes);
  ASSERT_DOUBLE_EQ(lower_bound_median(p), 8.0);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Game g(p.n(), random_pairs(p.n(), 8, seed));
    g.play_until(8);
    const auto a = pack_isomorphic(g.adversary(), p);
    const auto rep = finish_game(g.adversary(), g.transcript(), a);
    ASSERT_TRUE(rep.consistent) << seed;
  }
}

TEST(PackIsomorphic, AtMedianBudgetAgainstAlgorithms) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto p = brute::small_profile(rng, 60, 20);
    const auto rounds = static_cast<std::uint64_t>(lower_bound_median(p));
    for (const auto& alg : {sort_check_algorithm(p.n()), order_doubling_algorithm(p.n())}) {
      Game g(p.n(), alg);
      g.play_until(rounds);
      const auto rep = finish_game(g.adversary(), g.transcript(), pack_isomorphic(g.adversary(), p));
      EXPECT_TRUE(rep.consistent) << p.to_string();
    }
  }
}

TEST(Realize, TwoSingletonsAtRoot) {
  TreeAdversary adv(2);
  const auto inst = realize(adv, Assignment{{0, 1}, {1, 1}});
  EXPECT_EQ(inst[0].rank, 0u);
  EXPECT_EQ(inst[1].rank, 1u);
}

TEST(Realize, RejectsNonChainClusters) {
  TreeAdversary adv(3);
  adv.answer(0, 1);  // "0" and "1"
  EXPECT_THROW(realize(adv, Assignment{{0, 0, 1}, {2, 1}}), UsageError);
  EXPECT_NO_THROW(realize(adv, Assignment{{0, 1, 0}, {2, 1}}));
  EXPECT_THROW(realize(adv, Assignment{{0, 1}, {1, 1}}), UsageError);
}

TEST(Reconstruct, ZeroRoundsUsesRootOnly) {
  const ClusterProfile p({4, 2, 2});
  TreeAdversary adv(p.n());
  const auto rec = reconstruct(adv, p);
  ASSERT_TRUE(rec.complete);
  EXPECT_EQ(rec.reduced_clusters_formed, 0u);
  EXPECT_TRUE(verify_graph(realize(adv, rec.assignment), p));
}

TEST(Reconstruct, ShortGames) {
  const ClusterProfile p({4, 2, 2});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Game g(p.n(), random_pairs(p.n(), 1, seed));
    g.play_until(1);
    const auto rec = reconstruct(g.adversary(), p);
    ASSERT_TRUE(rec.complete) << seed;
    const auto rep = finish_game(g.adversary(), g.transcript(), rec.assignment);
    EXPECT_TRUE(rep.consistent);
  }
}

TEST(Reconstruct, WithinReducedBudget) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const auto p = brute::small_profile(rng, 200, 30);
    if (p.m() < 2) continue;
    const auto rounds = static_cast<std::uint64_t>(reduced_budget(p));
    Game g(p.n(), order_doubling_algorithm(p.n()));
    g.play_until(rounds);
    const auto rec = reconstruct(g.adversary(), p);
    ASSERT_TRUE(rec.complete) << p.to_string();
    EXPECT_TRUE(finish_game(g.adversary(), g.transcript(), rec.assignment).consistent);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Reconstruct, LongGamesReportLeftovers) {
  // Far beyond the budget, every element is deep and G' cannot absorb them.
  const ClusterProfile p(std::vector<std::uint64_t>(64, 2));
  Game g(p.n(), sort_check_algorithm(p.n()));
  g.play_until(100000);
  const auto rec = reconstruct(g.adversary(), p);
  EXPECT_FALSE(rec.complete);
  EXPECT_GT(rec.leftover_non_root, 0u);
}

TEST(PackGreedy, ClustersAreChainsOfSizeL) {
  const std::size_t n = 1024;
  Game g(n, oblivious_algorithm(n));
  g.play_until(few_deep_budget(n));
  const auto a = pack_greedy(g.adversary(), 64);
  const auto rep = finish_game(g.adversary(), g.transcript(), a);
  EXPECT_TRUE(rep.consistent);
  for (auto s : a.sizes) EXPECT_TRUE(s == 64 || s == 1);
}

TEST(Separation, PipelineAt1024) {
  const auto s = separation_run(1024, oblivious_algorithm(1024));
  EXPECT_TRUE(s.survived);
  EXPECT_TRUE(s.consistent);
  EXPECT_TRUE(s.c_bound_ok);
  EXPECT_EQ(s.median_outcome, Outcome::Duplicate);
  EXPECT_LE(s.median_comparisons, 40u * 1024u);
}

TEST(SIAdversary, IdleOpponent) {
  const auto g = si_adversary_game(idle(), 8);
  EXPECT_EQ(g.rounds, 0u);
  EXPECT_EQ(g.j, 1u);
  EXPECT_TRUE(g.consistent);
}

TEST(SIAdversary, MergeSortOpponent64) {
  const auto g = si_adversary_game(sort_check_algorithm(128), 64, 3);
  EXPECT_EQ(g.rounds, 64u);
  EXPECT_TRUE(g.consistent);
  const auto r = run_si(g.instance, si_clairvoyant_algorithm(64, 64, g.j));
  EXPECT_EQ(r.outcome, Outcome::Duplicate);
}

TEST(SIAdversary, DoublingOpponentThenClairvoyant) {
  for (std::uint64_t n : {8u, 64u, 512u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = si_adversary_game(si_doubling_algorithm(n, n), n, seed);
      EXPECT_EQ(g.rounds, n * si_ell(n) / 2);
      EXPECT_TRUE(g.consistent);
      const auto r = run_si(g.instance, si_clairvoyant_algorithm(n, n, g.j));
      ASSERT_EQ(r.outcome, Outcome::Duplicate);
      const auto joint = g.instance.combined();
      EXPECT_EQ(joint[r.witness->x].rank, joint[r.witness->y].rank);
    }
  }
}
