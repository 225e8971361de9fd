#pragma once

// Experiment plumbing: seeded random profiles, named algorithms, a worker
// pool, CSV tables and the sweeps behind the command-line verbs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "edlab/adversary.hpp"
#include "edlab/core.hpp"
#include "edlab/distinctness.hpp"
#include "edlab/oblivious.hpp"
#include "edlab/profiles.hpp"

namespace edlab {

// ------------------------------------------------------------------ seeding

/// EDLAB_SEED, when set to an integer, replaces the configured seed.
inline std::uint64_t resolve_seed(std::uint64_t configured) {
  if (const char* env = std::getenv("EDLAB_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
  }
  return configured;
}

/// Independent generator for item `index` of an experiment seeded with `seed`.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// ---------------------------------------------------------- random profiles

/// Sizes from a truncated power law (exponent in [1.1, 3], random minimum
/// scale), trimmed to sum to n. A third of the draws also reserve a random
/// fraction of n for singletons, so both many-small and few-large regimes occur.
inline ClusterProfile random_profile(std::mt19937_64& rng, std::uint64_t n) {
  if (n < 1) throw UsageError("random_profile needs n >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double alpha = 1.1 + 1.9 * unit(rng);
  const double xmin = std::floor(std::exp2(unit(rng) * std::log2(static_cast<double>(n)) / 2.0));
  std::vector<std::uint64_t> sizes;
  std::uint64_t remaining = n;
  if (unit(rng) < 1.0 / 3.0) {
    const auto singles = static_cast<std::uint64_t>(unit(rng) * static_cast<double>(n));
    sizes.assign(singles, 1);
    remaining -= singles;
  }
  while (remaining > 0) {
    const double x = xmin * std::pow(1.0 - unit(rng), -1.0 / (alpha - 1.0));
    const double capped = std::min(x, static_cast<double>(remaining));
    const auto s = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(capped));
    sizes.push_back(s);
    remaining -= s;
  }
  std::shuffle(sizes.begin(), sizes.end(), rng);
  return ClusterProfile(std::move(sizes));
}

/// A uniformly random composition of n into m positive parts.
inline ClusterProfile random_composition(std::mt19937_64& rng, std::uint64_t m, std::uint64_t n) {
  if (m < 1 || m > n) throw UsageError("random composition needs 1 <= m <= n");
  std::vector<std::uint64_t> points(n - 1);
  std::iota(points.begin(), points.end(), std::uint64_t{1});
  std::vector<std::uint64_t> cuts;
  cuts.reserve(m - 1);
  std::sample(points.begin(), points.end(), std::back_inserter(cuts), m - 1, rng);
  std::vector<std::uint64_t> sizes;
  std::uint64_t prev = 0;
  for (auto c : cuts) {
    sizes.push_back(c - prev);
    prev = c;
  }
  sizes.push_back(n - prev);
  return ClusterProfile(std::move(sizes));
}

// ---------------------------------------------------------------- workers

/// Calls fn(i) for i in [0, count) on up to `workers` threads (0: hardware).
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// --------------------------------------------------------------------- CSV

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

template <class T>
std::string cell(const T& v) {
  std::ostringstream s;
  s << v;
  return s.str();
}
inline std::string cell(bool v) { return v ? "true" : "false"; }
inline std::string cell(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

inline void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

// -------------------------------------------------------- named algorithms

struct AlgorithmOptions {
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> L;
  std::optional<ClusterProfile> profile;
};

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"block",   "median",   "clairvoyant", "oblivious",
                                              "preprocessed", "doubling", "sortcheck"};
  return names;
}

inline Algorithm named_algorithm(const std::string& name, std::size_t n, const AlgorithmOptions& opt) {
  auto need_profile = [&]() -> const ClusterProfile& {
    if (!opt.profile) throw UsageError("algorithm '" + name + "' needs a profile");
    if (opt.profile->n() != n) throw UsageError("profile size does not match the instance");
    return *opt.profile;
  };
  if (name == "block") {
    if (opt.k) return block_sorting_algorithm(n, *opt.k);
    const auto& p = need_profile();
    return block_sorting_algorithm(n, 2 * cd(p, select_L2(p).L).d);
  }
  if (name == "median") {
    if (opt.L) return median_recursion_algorithm(n, *opt.L);
    const auto l1 = select_L1(need_profile());
    return median_recursion_algorithm(n, l1 ? l1->L : 1);
  }
  if (name == "clairvoyant") return clairvoyant_algorithm(need_profile());
  if (name == "oblivious") return oblivious_algorithm(n);
  if (name == "preprocessed") return preprocessed_algorithm(preprocess(need_profile()));
  if (name == "doubling") return order_doubling_algorithm(n);
  if (name == "sortcheck") return sort_check_algorithm(n);
  throw UsageError("unknown algorithm '" + name + "'");
}

// ------------------------------------------------------------------- sweeps

struct CompetitiveRow {
  std::string profile_id;
  std::uint64_t n = 0;
  std::uint64_t clairvoyant = 0;
  std::uint64_t oblivious = 0;
  double ratio = 0.0;
  double ratio_per_lglg = 0.0;
};

inline CompetitiveRow competitive_row(const std::string& id, const ClusterProfile& profile, std::uint64_t seed) {
  const Instance inst = realize_instance(profile, seed);
  CountingOracle a(inst), b(inst);
  const auto rc = run_clairvoyant(inst, profile, a);
  const auto ro = run(b, oblivious_algorithm(profile.n()));
  CompetitiveRow row{id, profile.n(), rc.comparisons, ro.comparisons, 0.0, 0.0};
  row.ratio = static_cast<double>(ro.comparisons) / static_cast<double>(std::max<std::uint64_t>(1, rc.comparisons));
  row.ratio_per_lglg = row.ratio / log2_log2(profile.n());
  return row;
}

/// Clique, all-distinct and `random_count` random profiles per n.
inline std::vector<CompetitiveRow> sweep_competitive(const std::vector<std::uint64_t>& ns, std::size_t random_count,
                                                     std::uint64_t seed, unsigned workers = 0) {
  struct Job {
    std::string id;
    ClusterProfile profile;
  };
  std::vector<Job> jobs;
  for (auto n : ns) {
    jobs.push_back({"clique", ClusterProfile({n})});
    jobs.push_back({"distinct", ClusterProfile(std::vector<std::uint64_t>(n, 1))});
    for (std::size_t r = 0; r < random_count; ++r) {
      auto rng = stream_rng(seed, n * 100003 + r);
      jobs.push_back({"random" + std::to_string(r), random_profile(rng, n)});
    }
  }
  std::vector<CompetitiveRow> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { rows[i] = competitive_row(jobs[i].id, jobs[i].profile, seed + i); },
               workers);
  return rows;
}

inline Table competitive_table(const std::vector<CompetitiveRow>& rows) {
  Table t{{"n", "profile_id", "clairvoyant_cmp", "oblivious_cmp", "ratio", "ratio_per_lglg"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({cell(r.n), r.profile_id, cell(r.clairvoyant), cell(r.oblivious), cell(r.ratio),
                      cell(r.ratio_per_lglg)});
  return t;
}

inline Table separation_table(const std::vector<SeparationRun>& runs) {
  Table t{{"n", "rounds", "survived", "i", "L", "c_of_L", "c_bound_ok", "median_outcome", "median_cmp", "ratio",
           "consistent"},
          {}};
  for (const auto& s : runs)
    t.rows.push_back({cell(s.n), cell(s.rounds), cell(s.survived), cell(s.i), cell(s.L), cell(s.c_of_L),
                      cell(s.c_bound_ok), outcome_name(s.median_outcome), cell(s.median_comparisons),
                      cell(s.ratio), cell(s.consistent)});
  return t;
}

inline std::vector<SeparationRun> sweep_separation(const std::vector<std::uint64_t>& ns, unsigned workers = 0) {
  std::vector<SeparationRun> runs(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) { runs[i] = separation_run(ns[i], oblivious_algorithm(ns[i])); },
               workers);
  return runs;
}

struct BoundsRow {
  std::string profile;
  std::uint64_t n = 0;
  std::size_t m = 0;
  bool linear_subset = false;
  double approx_factor = 0.0;
  std::optional<std::uint64_t> block_iterations;  // only when a duplicate exists
  std::uint64_t iteration_bound = 0;
  bool ok = false;
};

inline BoundsRow check_profile_bounds(const ClusterProfile& profile, std::uint64_t seed) {
  BoundsRow r;
  r.profile = profile.to_string();
  r.n = profile.n();
  r.m = profile.m();
  r.linear_subset = check_linear_subset(profile);
  const auto l2 = select_L2(profile);
  r.approx_factor = approx_L2(profile).objective / l2.bound;
  const auto [c, d] = cd(profile, l2.L);
  r.iteration_bound = 1 + (c + d - 1) / d;
  bool iterations_ok = true;
  if (profile.max_size() >= 2) {
    const Instance inst = realize_instance(profile, seed);
    CountingOracle oracle(inst);
    const auto rep = run(oracle, block_sorting_algorithm(profile.n(), 2 * d));
    r.block_iterations = rep.diagnostics.iterations;
    iterations_ok = rep.outcome == Outcome::Duplicate && rep.diagnostics.iterations <= r.iteration_bound;
  }
  r.ok = r.linear_subset && r.approx_factor <= 3.0 && iterations_ok;
  return r;
}

/// Random multi-cluster profiles with n in [2, n_max].
inline std::vector<BoundsRow> check_bounds(std::size_t count, std::uint64_t n_max, std::uint64_t seed,
                                           unsigned workers = 0) {
  std::vector<BoundsRow> rows(count);
  parallel_for(count, [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    std::uniform_int_distribution<std::uint64_t> pick_n(2, n_max);
    ClusterProfile p;
    do {
      p = random_profile(rng, pick_n(rng));
    } while (p.m() < 2);
    rows[i] = check_profile_bounds(p, seed + i);
  }, workers);
  return rows;
}

inline Table bounds_table(const std::vector<BoundsRow>& rows) {
  Table t{{"n", "m", "linear_subset", "approx_factor", "block_iterations", "iteration_bound", "ok"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({cell(r.n), cell(r.m), cell(r.linear_subset), cell(r.approx_factor),
                      r.block_iterations ? cell(*r.block_iterations) : std::string("na"), cell(r.iteration_bound),
                      cell(r.ok)});
  return t;
}

struct DuelReport {
  std::uint64_t n = 0;
  std::uint64_t rounds = 0;
  std::string algo;
  bool survived = false;
  bool consistent = false;
  std::uint64_t clairvoyant_comparisons = 0;
  std::string packing;
};

/// Plays `algorithm` against the tree adversary for `rounds` rounds, then
/// realizes `profile`: by isomorphic packing when rounds fit the median
/// budget, by reconstruction otherwise.
inline DuelReport duel(const std::string& name, const Algorithm& algorithm, const ClusterProfile& profile,
                       std::uint64_t rounds) {
  const std::size_t n = profile.n();
  Game game(n, algorithm);
  game.play_until(rounds);
  DuelReport d;
  d.n = n;
  d.rounds = game.rounds();
  d.algo = name;
  d.survived = !game.halted() || game.outcome() != Outcome::Duplicate;
  std::optional<Assignment> assignment;
  if (static_cast<double>(game.rounds()) <= lower_bound_median(profile)) {
    assignment = pack_isomorphic(game.adversary(), profile);
    d.packing = "isomorphic";
  } else if (profile.m() >= 2) {
    auto rec = reconstruct(game.adversary(), profile);
    d.packing = "reconstruct";
    if (rec.complete) assignment = std::move(rec.assignment);
  }
  if (!assignment) {
    d.packing += ":failed";
    return d;
  }
  const auto report = finish_game(game.adversary(), game.transcript(), *assignment);
  d.consistent = report.consistent;
  CountingOracle oracle(report.realized);
  d.clairvoyant_comparisons = run_clairvoyant(report.realized, profile, oracle).comparisons;
  return d;
}

/// The default duel length: the larger of the two packing budgets.
inline std::uint64_t default_duel_rounds(const ClusterProfile& profile) {
  double budget = lower_bound_median(profile);
  if (profile.m() >= 2) budget = std::max(budget, reduced_budget(profile));
  return static_cast<std::uint64_t>(std::floor(budget));
}

}  // namespace edlab
