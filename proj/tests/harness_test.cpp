#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sys/wait.h>
#include <unistd.h>
#include <sstream>

#include "edlab/harness.hpp"
#include "edlab/io.hpp"

using namespace edlab;

namespace {

struct Shell {
  int status = -1;
  std::string out;
};

Shell cli(const std::string& args) {
  Shell r;
  const std::string cmd = std::string(EDLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t got; (got = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("edlab_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(RandomProfile, SumsAndDeterminism) {
  for (std::uint64_t n : {1u, 2u, 17u, 1000u, 65536u}) {
    auto r1 = stream_rng(7, n), r2 = stream_rng(7, n);
    const auto a = random_profile(r1, n);
    EXPECT_EQ(a.n(), n);
    EXPECT_EQ(a, random_profile(r2, n));
  }
  EXPECT_THROW({ auto r = stream_rng(1, 1); random_profile(r, 0); }, UsageError);
}

TEST(RandomProfile, CoversBothRegimes) {
  bool many_small = false, few_large = false;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = stream_rng(3, i);
    const auto p = random_profile(rng, 4096);
    if (p.m() > 2048) many_small = true;
    if (p.m() < 64) few_large = true;
  }
  EXPECT_TRUE(many_small);
  EXPECT_TRUE(few_large);
}

TEST(RandomComposition, PartsAndErrors) {
  auto rng = stream_rng(2, 0);
  const auto p = random_composition(rng, 5, 40);
  EXPECT_EQ(p.m(), 5u);
  EXPECT_EQ(p.n(), 40u);
  EXPECT_EQ(random_composition(rng, 40, 40), ClusterProfile(std::vector<std::uint64_t>(40, 1)));
  EXPECT_THROW(random_composition(rng, 41, 40), UsageError);
}

TEST(StreamRng, IndependentStreams) {
  auto a = stream_rng(1, 0), b = stream_rng(1, 1), c = stream_rng(2, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
}

TEST(ResolveSeed, EnvironmentOverrides) {
  ::unsetenv("EDLAB_SEED");
  EXPECT_EQ(resolve_seed(5), 5u);
  ::setenv("EDLAB_SEED", "77", 1);
  EXPECT_EQ(resolve_seed(5), 77u);
  ::setenv("EDLAB_SEED", "x1", 1);
  EXPECT_EQ(resolve_seed(5), 5u);
  ::unsetenv("EDLAB_SEED");
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 4);
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 1000);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(50, [](std::size_t i) { if (i == 17) throw UsageError("boom"); }, 3), UsageError);
  EXPECT_THROW(parallel_for(5, [](std::size_t) { throw InternalError("x"); }, 1), InternalError);
}

TEST(Csv, Format) {
  std::ostringstream out;
  write_csv(out, Table{{"a", "b"}, {{cell(1), cell(true)}, {cell(0.5), "x"}}});
  EXPECT_EQ(out.str(), "a,b\n1,true\n0.5,x\n");
}

TEST(Io, RoundTrips) {
  const auto inst = Instance::from_ranks({4, 0, 4, 9});
  std::stringstream s1;
  io::write_instance(s1, inst);
  EXPECT_EQ(io::read_instance(s1).ranks(), inst.ranks());

  const ClusterProfile p({3, 1, 2});
  std::stringstream s2;
  io::write_profile(s2, p);
  EXPECT_EQ(io::read_profile(s2), p);

  const Transcript t{{0, 1, Order::Less}, {2, 1, Order::Equal}, {3, 0, Order::Greater}};
  std::stringstream s3;
  io::write_transcript(s3, t);
  EXPECT_EQ(io::read_transcript(s3), t);

  const SIInstance si{Instance::from_ranks({1, 2}), Instance::from_ranks({2, 5, 6})};
  std::stringstream s4;
  io::write_si_instance(s4, si);
  const auto back = io::read_si_instance(s4);
  EXPECT_EQ(back.a.ranks(), si.a.ranks());
  EXPECT_EQ(back.b.ranks(), si.b.ranks());
}

TEST(Io, CommentsAndErrors) {
  std::istringstream ok("# header\n\n3\n 1 \n");
  EXPECT_EQ(io::read_numbers(ok), (std::vector<std::uint64_t>{3, 1}));
  std::istringstream bad("3\nx\n");
  EXPECT_THROW(io::read_numbers(bad), UsageError);
  std::istringstream empty("");
  EXPECT_THROW(io::read_instance(empty), UsageError);
  std::istringstream zero("2\n0\n");
  EXPECT_THROW(io::read_profile(zero), UsageError);
  std::istringstream tr("0\t1\n");
  EXPECT_THROW(io::read_transcript(tr), UsageError);
  std::istringstream si("1\nA:\n2\n");
  EXPECT_THROW(io::read_si_instance(si), UsageError);
  EXPECT_THROW(io::read_instance(std::string("/nonexistent/edlab/file")), UsageError);
}

TEST(NamedAlgorithms, AllNamesResolve) {
  const ClusterProfile p({3, 1, 1, 1});
  const auto inst = realize_instance(p, 4);
  AlgorithmOptions opt;
  opt.profile = p;
  for (const auto& name : algorithm_names()) {
    CountingOracle o(inst);
    EXPECT_EQ(run(o, named_algorithm(name, 6, opt)).outcome, Outcome::Duplicate) << name;
  }
  EXPECT_THROW(named_algorithm("nope", 6, opt), UsageError);
  EXPECT_THROW(named_algorithm("clairvoyant", 6, AlgorithmOptions{}), UsageError);
  EXPECT_THROW(named_algorithm("clairvoyant", 7, opt), UsageError);
}

TEST(Sweeps, SmallCompetitiveAndBounds) {
  const auto rows = sweep_competitive({64}, 2, 1, 1);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].profile_id, "clique");
  for (const auto& r : rows) EXPECT_GT(r.oblivious, 0u);
  for (const auto& r : check_bounds(20, 200, 3, 1)) EXPECT_TRUE(r.ok) << r.profile;
}

TEST(Duel, BothPackings) {
  std::vector<std::uint64_t> sizes(16, 1);
  sizes.push_back(2);
  const ClusterProfile p(sizes);
  const auto iso = duel("sortcheck", sort_check_algorithm(p.n()), p, 8);
  EXPECT_EQ(iso.packing, "isomorphic");
  EXPECT_TRUE(iso.consistent);
  EXPECT_TRUE(iso.survived);

  const ClusterProfile q(std::vector<std::uint64_t>(16, 8));
  ASSERT_DOUBLE_EQ(lower_bound_median(q), 0.0);
  const auto rec = duel("doubling", order_doubling_algorithm(q.n()), q, 3);
  EXPECT_EQ(rec.packing, "reconstruct");
  EXPECT_TRUE(rec.consistent);
}

TEST(Cli, GenClique) {
  const auto r = cli("gen --clique n=16");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "16\n");
}

TEST(Cli, GenRunAndTranscript) {
  const auto prof = temp_file("p.txt"), inst = temp_file("i.txt"), tr = temp_file("t.tsv");
  ASSERT_EQ(cli("--seed 3 gen --profile-random m=5 n=40 --out " + prof.string() + " --instance " + inst.string())
                .status,
            0);
  const auto p = io::read_profile(prof.string());
  EXPECT_EQ(p.n(), 40u);
  EXPECT_EQ(p.m(), 5u);
  EXPECT_TRUE(verify_graph(io::read_instance(inst.string()), p));

  const auto r = cli("run --algo clairvoyant --input " + inst.string() + " --profile " + prof.string() +
                     " --transcript " + tr.string());
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("algo,n,outcome,comparisons,witness_x,witness_y\nclairvoyant,40,duplicate,", 0), 0u) << r.out;
  EXPECT_TRUE(replay_transcript(io::read_instance(inst.string()), io::read_transcript(tr.string())));
  for (const auto& f : {prof, inst, tr}) std::filesystem::remove(f);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("run --algo median --input /nonexistent/x").status, 2);
  EXPECT_NE(cli("run --algo nosuch --input x").status, 0);
  EXPECT_EQ(cli("gen").status, 2);
}

TEST(Cli, ProfileAndSi) {
  const auto prof = temp_file("q.txt");
  {
    std::ofstream o(prof);
    o << "3\n1\n1\n1\n";
  }
  const auto b = cli("profile bounds " + prof.string());
  EXPECT_EQ(b.status, 0);
  EXPECT_NE(b.out.find("L1"), std::string::npos) << b.out;
  const auto s = cli("profile stats " + prof.string());
  EXPECT_EQ(s.status, 0);
  std::filesystem::remove(prof);

  const auto si = temp_file("si.txt");
  ASSERT_EQ(cli("si gen --n 64 --i 2 --out " + si.string()).status, 0);
  const auto r = cli("si run --algo clairvoyant --i 2 --input " + si.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("duplicate"), std::string::npos) << r.out;
  std::filesystem::remove(si);
}
