// supertree: maximum agreement / compatible supertrees of k phylogenetic trees.
//
//   supertree --problem masp --mode rooted --input trees.nwk [--verify] [--stats]
//   supertree --mode unrooted --seed 7 --gen-k 3 --gen-n 6 --gen-d 3 [--output FILE]
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 infeasible input, 4 verification mismatch.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "supertree/supertree.hpp"

namespace {

using namespace supertree;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kInfeasible = 3, kMismatch = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem;
  std::string mode = "rooted";
  std::string input;
  std::string output;
  bool verify = false;
  bool stats = false;
  bool dump_states = false;
  std::optional<std::uint64_t> seed;
  int gen_k = 2;
  int gen_n = 5;
  int gen_d = 3;
  std::optional<std::size_t> oracle_cap;
};

template <class Solver>
void dump_states(const Solver& solver, std::ostream& err) {
  std::vector<StateKey> keys;
  for (const auto& [key, e] : solver.memo()) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (StateKey key : keys)
    err << key << " value=" << solver.memo().at(key).value << " "
        << solver.space().describe(solver.space().decode(key)) << "\n";
}

template <PhyloTree Tree, class Solver>
int solve_and_report(const RunConfig& cfg, const ProblemInstance<Tree>& inst, std::ostream& out, std::ostream& err) {
  const bool masp = cfg.problem == "masp";
  const std::size_t cap = cfg.oracle_cap.value_or(kIsRooted<Tree> ? kDefaultRootedOracleCap : kDefaultUnrootedOracleCap);
  if (cfg.verify && inst.n() > cap)
    throw UsageError("--verify needs n <= oracle cap (n=" + std::to_string(inst.n()) + ", cap=" + std::to_string(cap) +
                     "); raise it with --oracle-cap");

  Solver solver(inst);
  SupertreeResult<Tree> res = solver.solve();
  out << "size=" << res.size << "\n" << write_newick(res.tree) << "\n";

  if (cfg.dump_states) dump_states(solver, err);
  if (cfg.stats) {
    nlohmann::json j = {{"problem", cfg.problem},
                        {"mode", cfg.mode},
                        {"k", inst.k()},
                        {"n", inst.n()},
                        {"size", res.size},
                        {"states_visited", res.stats.states_visited},
                        {"transitions", res.stats.transitions},
                        {"memo_size", solver.memo().size()},
                        {"wall_ms", res.stats.wall_ms}};
    err << j.dump() << "\n";
  }

  if (cfg.verify) {
    OracleResult<Tree> ref = masp ? brute_masp(inst, cap) : brute_mcsp(inst, cap);
    bool witness_ok = masp ? is_agreement_supertree(res.tree, inst) : is_compatible_supertree(res.tree, inst);
    witness_ok = witness_ok && res.tree.leaf_count() == res.size;
    if (ref.size != res.size || !witness_ok) {
      err << "verification FAILED: dp size " << res.size << ", oracle size " << ref.size << " ("
          << write_newick(ref.witness) << "), witness " << (witness_ok ? "valid" : "INVALID") << "\n";
      return kMismatch;
    }
    err << "verified: oracle size " << ref.size << "\n";
  }
  return kOk;
}

template <PhyloTree Tree>
int solve_text(const RunConfig& cfg, std::istream& in, const std::string& name, std::ostream& out, std::ostream& err) {
  ProblemInstance<Tree> inst = load_instance<Tree>(in, name);
  if (cfg.problem == "masp") return solve_and_report<Tree, MaspSolver<Tree>>(cfg, inst, out, err);
  return solve_and_report<Tree, McspSolver<Tree>>(cfg, inst, out, err);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool rooted = cfg.mode == "rooted";
  if (cfg.seed && !cfg.input.empty()) throw UsageError("--seed generates an instance; it cannot be combined with --input");

  if (cfg.seed) {
    GeneratorConfig g;
    g.seed = *cfg.seed;
    g.k = cfg.gen_k;
    g.n = cfg.gen_n;
    g.max_degree = cfg.gen_d;
    g.rooted = rooted;
    std::string text;
    try {
      text = generate_instance(g);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (!cfg.output.empty()) {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw UsageError("cannot write '" + cfg.output + "'");
      f << text;
    } else if (cfg.problem.empty()) {
      out << text;
    }
    if (cfg.problem.empty()) return kOk;
    std::istringstream in(text);
    const std::string name = "<seed " + std::to_string(*cfg.seed) + ">";
    return rooted ? solve_text<RootedTree>(cfg, in, name, out, err) : solve_text<UnrootedTree>(cfg, in, name, out, err);
  }

  if (cfg.problem.empty()) throw UsageError("--problem is required when solving");
  if (cfg.input.empty()) throw UsageError("--input is required (or --seed to generate)");
  std::ifstream in(cfg.input);
  if (!in) throw UsageError("cannot open input file '" + cfg.input + "'");
  return rooted ? solve_text<RootedTree>(cfg, in, cfg.input, out, err)
                : solve_text<UnrootedTree>(cfg, in, cfg.input, out, err);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Maximum agreement / compatible supertrees"};
  app.add_option("--problem", cfg.problem, "masp or mcsp")->check(CLI::IsMember({"masp", "mcsp"}));
  app.add_option("--mode", cfg.mode, "rooted or unrooted")->check(CLI::IsMember({"rooted", "unrooted"}));
  app.add_option("--input", cfg.input, "instance file, one Newick tree per line");
  app.add_flag("--verify", cfg.verify, "cross-check against the brute-force oracle");
  app.add_flag("--stats", cfg.stats, "print a JSON stats object on stderr");
  app.add_flag("--dump-states", cfg.dump_states, "print every memoized state on stderr");
  app.add_option("--seed", cfg.seed, "generate a random instance from this seed");
  app.add_option("--gen-k", cfg.gen_k, "generated trees")->check(CLI::PositiveNumber);
  app.add_option("--gen-n", cfg.gen_n, "generated label universe size")->check(CLI::PositiveNumber);
  app.add_option("--gen-d", cfg.gen_d, "generated max degree")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "write the generated instance here");
  app.add_option("--oracle-cap", cfg.oracle_cap, "largest n the oracle will attempt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return run(cfg, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  } catch (const InfeasibleInput& e) {
    std::cerr << "infeasible input: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::length_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}
