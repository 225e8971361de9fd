#include <gtest/gtest.h>

#include <random>

#include "edlab/set_intersection.hpp"

using namespace edlab;

namespace {

std::uint64_t brute_intersections(const SIInstance& s) {
  std::uint64_t hits = 0;
  for (auto x : s.a.values())
    for (auto y : s.b.values())
      if (x.rank == y.rank) ++hits;
  return hits;
}

SIInstance from_ranks(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  return {Instance::from_ranks(std::move(a)), Instance::from_ranks(std::move(b))};
}

}  // namespace

TEST(SIFamily, SixtyFourWithRunTwo) {
  const auto f = si_family(64, 2);
  std::vector<BipartiteCluster> expect{{54, 0}, {1, 0}, {2, 1}, {3, 0}, {4, 0}};
  for (int k = 0; k < 63; ++k) expect.push_back({0, 1});
  EXPECT_EQ(f, BipartiteProfile(expect));
  EXPECT_EQ(f.n_a(), 64u);
  EXPECT_EQ(f.n_b(), 64u);
  EXPECT_FALSE(f == si_family(64, 1));
}

TEST(SIFamily, EightIsTheSmallest) {
  const auto f = si_family(8, 1);
  EXPECT_EQ(f, BipartiteProfile({{5, 0}, {1, 1}, {2, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}}));
  EXPECT_THROW(si_family(8, 3), UsageError);
  EXPECT_THROW(si_family(8, 0), UsageError);
  EXPECT_THROW(si_family(16, 1), UsageError);
}

TEST(SIFamily, TotalsAndUniqueIntersection) {
  for (std::uint64_t n : {8u, 64u, 512u, 4096u}) {
    const auto r = si_cube_root(n);
    for (std::uint64_t i : {std::uint64_t{1}, r}) {
      const auto f = si_family(n, i);
      EXPECT_EQ(f.n_a(), n);
      EXPECT_EQ(f.n_b(), n);
      EXPECT_EQ(f.clusters().size(), r + n);
      const auto inst = realize_si(f, n + i);
      EXPECT_EQ(bipartite_profile_of(inst), f);
      EXPECT_EQ(brute_intersections(inst), i);
    }
  }
}

TEST(SIDoubling, Examples) {
  const auto hit = run_si(from_ranks({1, 2, 3}, {9, 3}), si_doubling_algorithm(3, 2));
  ASSERT_EQ(hit.outcome, Outcome::Duplicate);
  EXPECT_EQ(*hit.witness, (Witness{2, 4}));

  const auto miss = run_si(from_ranks({1, 1, 2}, {3, 3}), si_doubling_algorithm(3, 2));
  EXPECT_EQ(miss.outcome, Outcome::Distinct);
}

TEST(SIDoubling, SoundOnRandomInstances) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const std::size_t na = 1 + rng() % 20, nb = 1 + rng() % 20;
    std::vector<std::uint64_t> a(na), b(nb);
    for (auto& v : a) v = rng() % 30;
    for (auto& v : b) v = rng() % 30;
    const auto inst = from_ranks(a, b);
    const auto r = run_si(inst, si_doubling_algorithm(na, nb));
    if (brute_intersections(inst) == 0) {
      EXPECT_EQ(r.outcome, Outcome::Distinct);
    } else {
      ASSERT_EQ(r.outcome, Outcome::Duplicate);
      EXPECT_LT(r.witness->x, na);
      EXPECT_GE(r.witness->y, na);
      EXPECT_EQ(a[r.witness->x], b[r.witness->y - na]);
    }
  }
}

TEST(SIClairvoyant, LinearOnTheFamily) {
  for (std::uint64_t n : {8u, 64u, 512u, 4096u}) {
    const auto r = si_cube_root(n);
    for (std::uint64_t i : {std::uint64_t{1}, r / 2, r}) {
      if (i == 0) continue;
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = realize_si(si_family(n, i), seed);
        const auto rep = run_si(inst, si_clairvoyant_algorithm(n, n, i));
        ASSERT_EQ(rep.outcome, Outcome::Duplicate);
        EXPECT_LE(rep.comparisons, 12 * n) << n << " " << i;
      }
    }
  }
}

TEST(SIClairvoyant, PartnerScannedLast) {
  // The only B-partner of cluster i sits at the last B position.
  const std::uint64_t n = 64;
  auto inst = realize_si(si_family(n, 3), 5);
  std::vector<Value> b(inst.b.values());
  const auto partner = std::find_if(b.begin(), b.end(), [&](Value v) {
    return std::any_of(inst.a.values().begin(), inst.a.values().end(), [&](Value a) { return a.rank == v.rank; });
  });
  std::iter_swap(partner, b.end() - 1);
  inst.b = Instance(std::move(b));
  const auto rep = run_si(inst, si_clairvoyant_algorithm(n, n, 3));
  ASSERT_EQ(rep.outcome, Outcome::Duplicate);
  EXPECT_EQ(rep.witness->y, 2 * n - 1);
  EXPECT_LE(rep.comparisons, 12 * n);
}

TEST(SIClairvoyant, WrongRunLengthGivesUp) {
  const auto inst = realize_si(si_family(64, 2), 1);
  EXPECT_EQ(run_si(inst, si_clairvoyant_algorithm(64, 64, 7)).outcome, Outcome::GaveUp);
}

TEST(BipartiteProfileType, RejectsEmptyClusters) {
  EXPECT_THROW(BipartiteProfile({{0, 0}}), UsageError);
}
