// edlab: command-line front end for the element-distinctness laboratory.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edlab/edlab.hpp"

namespace {

using namespace edlab;

std::map<std::string, std::uint64_t> parse_pairs(const std::vector<std::string>& items) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + s + "'");
    try {
      out[s.substr(0, eq)] = std::stoull(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad number in '" + s + "'");
    }
  }
  return out;
}

std::uint64_t require(const std::map<std::string, std::uint64_t>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw UsageError("missing " + key + "=...");
  return it->second;
}

/// Writes to `path`, or to stdout when path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  fn(out);
}

std::string witness_cell(const std::optional<Witness>& w, bool first) {
  if (!w) return "";
  return std::to_string(first ? w->x : w->y);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparison-model laboratory for element distinctness and set intersection"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  unsigned threads = 0;
  app.add_option("--seed", seed, "Experiment seed (EDLAB_SEED overrides)");
  app.add_option("--threads", threads, "Worker threads (0: hardware)");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a profile file and optionally a realized instance");
  std::vector<std::string> gen_random, gen_clique, gen_powerlaw;
  std::string gen_out, gen_instance;
  auto* opt_random = gen->add_option("--profile-random", gen_random, "m=M n=N: random composition")->expected(2);
  auto* opt_clique = gen->add_option("--clique", gen_clique, "n=N: one clique")->expected(1);
  auto* opt_power = gen->add_option("--powerlaw", gen_powerlaw, "n=N: truncated power-law sizes")->expected(1);
  opt_random->excludes(opt_clique)->excludes(opt_power);
  opt_clique->excludes(opt_power);
  gen->add_option("--out", gen_out, "Profile file (default stdout)");
  gen->add_option("--instance", gen_instance, "Also write a realized instance here");

  // run
  auto* runc = app.add_subcommand("run", "Run one algorithm on an instance file");
  std::string run_algo, run_input, run_profile, run_transcript;
  std::optional<std::uint64_t> run_k, run_L;
  runc->add_option("--algo", run_algo)->required()->check(CLI::IsMember(algorithm_names()));
  runc->add_option("--input", run_input)->required();
  runc->add_option("--k", run_k, "Block size for block");
  runc->add_option("--L", run_L, "Small-call threshold for median");
  runc->add_option("--profile", run_profile, "Profile file for clairvoyant/preprocessed");
  runc->add_option("--transcript", run_transcript, "Write the comparison transcript here");

  // duel
  auto* duelc = app.add_subcommand("duel", "Play an algorithm against the tree adversary");
  std::string duel_algo, duel_profile;
  std::uint64_t duel_n = 0;
  std::optional<std::uint64_t> duel_rounds;
  duelc->add_option("--algo", duel_algo)->required()->check(CLI::IsMember(algorithm_names()));
  duelc->add_option("--n", duel_n)->required();
  duelc->add_option("--profile", duel_profile)->required();
  duelc->add_option("--rounds", duel_rounds, "Rounds to play (default: the larger packing budget)");

  // sweeps
  auto* compc = app.add_subcommand("sweep-competitive", "Oblivious vs clairvoyant comparison counts");
  std::vector<std::uint64_t> comp_n{4096};
  std::size_t comp_profiles = 20;
  std::string comp_out;
  compc->add_option("--n", comp_n)->expected(1, -1);
  compc->add_option("--profiles", comp_profiles, "Random profiles per n");
  compc->add_option("--out", comp_out);

  auto* sepc = app.add_subcommand("sweep-separation", "Adversary vs oblivious, then median recursion");
  std::vector<std::uint64_t> sep_n{1024, 4096, 16384};
  std::string sep_out;
  sepc->add_option("--n", sep_n)->expected(1, -1);
  sepc->add_option("--out", sep_out);

  auto* boundc = app.add_subcommand("check-bounds", "Linear-subset, approximation and iteration checks");
  std::size_t bound_count = 10000;
  std::uint64_t bound_nmax = 4096;
  std::string bound_out;
  boundc->add_option("--count", bound_count);
  boundc->add_option("--n-max", bound_nmax);
  boundc->add_option("--out", bound_out);

  // si
  auto* si = app.add_subcommand("si", "Set intersection");
  si->require_subcommand(1);
  auto* si_run = si->add_subcommand("run", "Run a set-intersection algorithm");
  std::string si_algo, si_input;
  std::optional<std::uint64_t> si_i, si_n;
  si_run->add_option("--algo", si_algo)->required()->check(CLI::IsMember({"doubling", "clairvoyant"}));
  si_run->add_option("--input", si_input)->required();
  si_run->add_option("--i", si_i);
  si_run->add_option("--n", si_n);
  auto* si_gen = si->add_subcommand("gen", "Write a realization of the lower-bound family");
  std::uint64_t sig_n = 64, sig_i = 1;
  std::string sig_out;
  si_gen->add_option("--n", sig_n);
  si_gen->add_option("--i", sig_i);
  si_gen->add_option("--out", sig_out);

  // profile
  auto* prof = app.add_subcommand("profile", "Profile quantities");
  prof->require_subcommand(1);
  std::string prof_file;
  auto* prof_stats = prof->add_subcommand("stats", "n, m and the step functions");
  prof_stats->add_option("file", prof_file)->required();
  auto* prof_bounds = prof->add_subcommand("bounds", "Selected parameters and lower bounds");
  prof_bounds->add_option("file", prof_file)->required();

  CLI11_PARSE(app, argc, argv);
  seed = resolve_seed(seed);

  try {
    if (*gen) {
      auto rng = stream_rng(seed, 0);
      ClusterProfile p;
      if (*opt_random) {
        const auto kv = parse_pairs(gen_random);
        p = random_composition(rng, require(kv, "m"), require(kv, "n"));
      } else if (*opt_clique) {
        p = ClusterProfile({require(parse_pairs(gen_clique), "n")});
      } else if (*opt_power) {
        p = random_profile(rng, require(parse_pairs(gen_powerlaw), "n"));
      } else {
        throw UsageError("gen needs --profile-random, --clique or --powerlaw");
      }
      emit(gen_out, [&](std::ostream& o) { io::write_profile(o, p); });
      if (!gen_instance.empty()) io::write_instance(gen_instance, realize_instance(p, seed));
      return 0;
    }

    if (*runc) {
      const Instance inst = io::read_instance(run_input);
      AlgorithmOptions opt{run_k, run_L, std::nullopt};
      if (!run_profile.empty()) opt.profile = io::read_profile(run_profile);
      if (opt.profile && !verify_graph(inst, *opt.profile))
        throw UsageError("instance does not realize the given profile");
      CountingOracle oracle(inst);
      const auto rep = run(oracle, named_algorithm(run_algo, inst.size(), opt));
      Table t{{"algo", "n", "outcome", "comparisons", "witness_x", "witness_y"}, {}};
      t.rows.push_back({run_algo, cell(inst.size()), outcome_name(rep.outcome), cell(rep.comparisons),
                        witness_cell(rep.witness, true), witness_cell(rep.witness, false)});
      write_csv(std::cout, t);
      if (!run_transcript.empty()) io::write_transcript(run_transcript, oracle.transcript());
      return 0;
    }

    if (*duelc) {
      const auto p = io::read_profile(duel_profile);
      if (p.n() != duel_n) throw UsageError("--n does not match the profile");
      AlgorithmOptions opt{std::nullopt, std::nullopt, p};
      const auto rounds = duel_rounds.value_or(default_duel_rounds(p));
      const auto d = duel(duel_algo, named_algorithm(duel_algo, duel_n, opt), p, rounds);
      Table t{{"n", "rounds", "algo", "survived", "consistency", "clairvoyant_comparisons", "packing"}, {}};
      t.rows.push_back({cell(d.n), cell(d.rounds), d.algo, cell(d.survived), cell(d.consistent),
                        cell(d.clairvoyant_comparisons), d.packing});
      write_csv(std::cout, t);
      return d.survived && d.consistent ? 0 : 1;
    }

    if (*compc) {
      const auto rows = sweep_competitive(comp_n, comp_profiles, seed, threads);
      emit(comp_out, [&](std::ostream& o) { write_csv(o, competitive_table(rows)); });
      return 0;
    }

    if (*sepc) {
      const auto runs = sweep_separation(sep_n, threads);
      emit(sep_out, [&](std::ostream& o) { write_csv(o, separation_table(runs)); });
      for (const auto& s : runs) {
        if (!s.survived || !s.consistent || !s.c_bound_ok || s.median_outcome != Outcome::Duplicate) {
          std::cerr << "violation at n=" << s.n << "\n";
          return 1;
        }
      }
      return 0;
    }

    if (*boundc) {
      const auto rows = check_bounds(bound_count, bound_nmax, seed, threads);
      emit(bound_out, [&](std::ostream& o) { write_csv(o, bounds_table(rows)); });
      for (const auto& r : rows) {
        if (!r.ok) {
          std::cerr << "violation on profile " << r.profile << "\n";
          return 1;
        }
      }
      return 0;
    }

    if (*si_run) {
      const auto inst = io::read_si_instance(si_input);
      Algorithm alg;
      if (si_algo == "doubling") {
        alg = si_doubling_algorithm(inst.size_a(), inst.size_b());
      } else {
        if (!si_i) throw UsageError("clairvoyant needs --i");
        if (si_n && (*si_n != inst.size_a() || *si_n != inst.size_b()))
          throw UsageError("--n does not match the instance");
        alg = si_clairvoyant_algorithm(inst.size_a(), inst.size_b(), *si_i);
      }
      const auto rep = run_si(inst, alg);
      Table t{{"algo", "n_a", "n_b", "outcome", "comparisons", "witness_x", "witness_y"}, {}};
      t.rows.push_back({si_algo, cell(inst.size_a()), cell(inst.size_b()),
                        rep.outcome == Outcome::Distinct ? "disjoint" : outcome_name(rep.outcome),
                        cell(rep.comparisons), witness_cell(rep.witness, true), witness_cell(rep.witness, false)});
      write_csv(std::cout, t);
      return 0;
    }

    if (*si_gen) {
      const auto inst = realize_si(si_family(sig_n, sig_i), seed);
      emit(sig_out, [&](std::ostream& o) { io::write_si_instance(o, inst); });
      return 0;
    }

    if (*prof_stats) {
      const auto p = io::read_profile(prof_file);
      const StepFunctions f(p);
      Table t{{"L_from", "L_to", "C", "D"}, {}};
      for (const auto& s : f.segments())
        t.rows.push_back({cell(s.lo), s.hi == kUnbounded ? std::string("inf") : cell(s.hi), cell(s.c), cell(s.d)});
      std::cout << "# n=" << p.n() << " m=" << p.m() << " max=" << p.max_size() << "\n";
      write_csv(std::cout, t);
      return 0;
    }

    if (*prof_bounds) {
      const auto p = io::read_profile(prof_file);
      const auto l1 = select_L1(p);
      const auto l2 = select_L2(p);
      const auto ap = approx_L2(p);
      const auto lb = lower_bounds(p);
      Table t{{"n", "m", "L1", "bound1", "L2", "bound2", "L2_approx", "approx_objective", "M_median", "M_block",
               "M_combined", "linear_subset"},
              {}};
      t.rows.push_back({cell(p.n()), cell(p.m()), l1 ? cell(l1->L) : std::string("none"),
                        l1 ? cell(l1->bound) : std::string("none"), cell(l2.L), cell(l2.bound), cell(ap.L),
                        cell(ap.objective), cell(lb.median), cell(lb.block), cell(lb.combined),
                        p.m() >= 2 ? cell(check_linear_subset(p)) : std::string("na")});
      write_csv(std::cout, t);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
