#include <chrono>
#include <fstream>
#include <iostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mitl/bench.hpp"
#include "mitl/dcm.hpp"
#include "mitl/synth.hpp"

using namespace mitl;
using nlohmann::json;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapped = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out.good()) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct RunSummary {
  std::string verdict;  // REALISABLE / UNREALISABLE / RESOURCE_CAPPED
  size_t nodes = 0;
  size_t depth = 0;
  long long wall_ms = 0;
  std::string controller_path;  // non-empty iff REALISABLE
};

size_t tree_depth(const SynthTree& tree) {
  if (tree.nodes.empty()) return 0;
  std::vector<int> dist(tree.nodes.size(), -1);
  std::queue<int> bfs;
  dist[0] = 0;
  bfs.push(0);
  size_t deepest = 0;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    deepest = std::max(deepest, (size_t)dist[u]);
    for (int v : tree.nodes[u].child)
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        bfs.push(v);
      }
  }
  return deepest;
}

void emit_summary(const RunSummary& s) {
  std::cout << "verdict:    " << s.verdict << "\n"
            << "nodes:      " << s.nodes << "\n"
            << "depth:      " << s.depth << "\n"
            << "wall ms:    " << s.wall_ms << "\n";
  if (!s.controller_path.empty())
    std::cout << "controller: " << s.controller_path << "\n";
  json j{{"verdict", s.verdict},
         {"nodes", s.nodes},
         {"depth", s.depth},
         {"wall_ms", s.wall_ms}};
  if (!s.controller_path.empty()) j["controller"] = s.controller_path;
  std::cout << j.dump() << "\n";
}

int run_synth(const Sts& plant, const FormulaPtr& spec, const Granularity& mu,
              const BuildOptions& opts, const std::string& out_path) {
  validate_plant(plant);
  auto t0 = std::chrono::steady_clock::now();
  RunSummary s;
  try {
    SynthTree tree = build_tree(plant, spec, mu, opts);
    SolveResult res = solve(tree);
    s.nodes = tree.nodes.size();
    s.depth = tree_depth(tree);
    if (res.winning) {
      s.verdict = "REALISABLE";
      Sts C = extract_controller(tree, *res.strategy, mu);
      spit(out_path, print_sts(C));
      s.controller_path = out_path;
    } else {
      s.verdict = "UNREALISABLE";
    }
  } catch (const BudgetExceeded&) {
    s.verdict = "RESOURCE_CAPPED";
    s.nodes = opts.node_budget;
  }
  s.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  emit_summary(s);
  if (s.verdict == "REALISABLE") return kExitTrue;
  if (s.verdict == "UNREALISABLE") return kExitFalse;
  return kExitCapped;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MITL reactive synthesis over finite timed words"};
  app.require_subcommand(1);

  // --- synth ---------------------------------------------------------------
  std::string plant_file, formula_file, out_path = "controller.txt";
  std::vector<std::string> clock_names;
  long long gran_m = 1, gran_k = 1;
  size_t node_budget = 1000000;
  int threads = 1;
  auto* synth_cmd = app.add_subcommand("synth", "decide realisability and extract a controller");
  synth_cmd->add_option("plant", plant_file, "plant file")->required();
  synth_cmd->add_option("formula", formula_file, "specification file")->required();
  synth_cmd->add_option("--clocks", clock_names, "controller clock names");
  synth_cmd->add_option("--m", gran_m, "guard constants are multiples of 1/m");
  synth_cmd->add_option("--K", gran_k, "largest numerator of a guard constant");
  synth_cmd->add_option("--node-budget", node_budget, "explored-node cap");
  synth_cmd->add_option("--threads", threads, "worker threads");
  synth_cmd->add_option("--out", out_path, "controller output path");

  // --- mc ------------------------------------------------------------------
  std::string word_file;
  auto* mc_cmd = app.add_subcommand("mc", "evaluate a formula on a timed word");
  mc_cmd->add_option("formula", formula_file, "formula file")->required();
  mc_cmd->add_option("word", word_file, "timed-word file")->required();

  // --- verify --------------------------------------------------------------
  std::string controller_file;
  int depth = 6;
  auto* verify_cmd = app.add_subcommand("verify", "bounded closed-loop check of a controller");
  verify_cmd->add_option("controller", controller_file, "controller file")->required();
  verify_cmd->add_option("plant", plant_file, "plant file")->required();
  verify_cmd->add_option("formula", formula_file, "specification file")->required();
  verify_cmd->add_option("--depth", depth, "maximum closed-loop word length");

  // --- bench ---------------------------------------------------------------
  int bench_t = 1, bench_n = 1, bench_clocks = 0;
  auto* bench_cmd = app.add_subcommand("bench", "benchmark instance generators");
  bench_cmd->require_subcommand(1);
  auto* sched_cmd = bench_cmd->add_subcommand("sched", "machine-scheduling instance");
  sched_cmd->add_option("T", bench_t, "computation time per job")->required();
  sched_cmd->add_option("n", bench_n, "number of machines")->required();
  sched_cmd->add_option("clocks", bench_clocks, "controller clocks")->required();
  sched_cmd->add_option("--node-budget", node_budget, "explored-node cap");
  sched_cmd->add_option("--threads", threads, "worker threads");
  sched_cmd->add_option("--out", out_path, "controller output path");

  // --- dcm -----------------------------------------------------------------
  std::string machine_file, dcm_out = "dcm";
  int max_steps = 1000;
  auto* dcm_cmd = app.add_subcommand("dcm", "channel-machine reduction harness");
  dcm_cmd->require_subcommand(1);
  auto* sim_cmd = dcm_cmd->add_subcommand("simulate", "run the machine");
  sim_cmd->add_option("machine", machine_file, "machine file")->required();
  sim_cmd->add_option("--max", max_steps, "step bound");
  auto* eo_cmd = dcm_cmd->add_subcommand("encode-omega", "emit the realisability formulas");
  eo_cmd->add_option("machine", machine_file, "machine file")->required();
  eo_cmd->add_option("--out", dcm_out, "output file prefix");
  auto* ep_cmd = dcm_cmd->add_subcommand("encode-plant", "emit the plant-based encoding");
  ep_cmd->add_option("machine", machine_file, "machine file")->required();
  ep_cmd->add_option("--out", dcm_out, "output file prefix");
  auto* vp_cmd = dcm_cmd->add_subcommand("validate-play", "check a play against the machine");
  vp_cmd->add_option("machine", machine_file, "machine file")->required();
  vp_cmd->add_option("word", word_file, "timed-word file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth_cmd) {
      Sts P = parse_sts(slurp(plant_file));
      std::set<std::string> alphabet(P.sigma_c.begin(), P.sigma_c.end());
      alphabet.insert(P.sigma_e.begin(), P.sigma_e.end());
      FormulaPtr spec = parse_formula(slurp(formula_file), alphabet);
      Granularity mu{clock_names, gran_m, gran_k};
      BuildOptions opts;
      opts.node_budget = node_budget;
      opts.threads = threads;
      return run_synth(P, spec, mu, opts, out_path);
    }

    if (*mc_cmd) {
      FormulaPtr f = parse_formula(slurp(formula_file));
      TimedWord w = parse_timed_word(slurp(word_file));
      bool sat = evaluate(w, f);
      std::cout << (sat ? "true" : "false") << "\n";
      return sat ? kExitTrue : kExitFalse;
    }

    if (*verify_cmd) {
      Sts C = parse_sts(slurp(controller_file));
      Sts P = parse_sts(slurp(plant_file));
      std::set<std::string> alphabet(P.sigma_c.begin(), P.sigma_c.end());
      alphabet.insert(P.sigma_e.begin(), P.sigma_e.end());
      FormulaPtr spec = parse_formula(slurp(formula_file), alphabet);
      VerifyResult v = verify_controller(C, P, spec, depth);
      if (v.ok) {
        std::cout << "ok up to depth " << depth << "\n";
        return kExitTrue;
      }
      std::cout << "counterexample: " << v.counterexample->str() << "\n";
      return kExitFalse;
    }

    if (*sched_cmd) {
      SchedInstance inst = sched_instance(bench_t, bench_n, bench_clocks);
      BuildOptions opts;
      opts.node_budget = node_budget;
      opts.threads = threads;
      return run_synth(inst.plant, inst.spec, inst.mu, opts, out_path);
    }

    if (*sim_cmd) {
      ChannelMachine S = parse_dcm(slurp(machine_file));
      DcmOutcome out = simulate(S, max_steps);
      switch (out.kind) {
        case DcmOutcome::Kind::Halted:
          std::cout << "Halted(" << out.steps << "), N=" << out.max_occupancy << "\n";
          break;
        case DcmOutcome::Kind::Blocked:
          std::cout << "Blocked(" << S.states[out.blocked_state] << ", " << out.steps
                    << "), N=" << out.max_occupancy << "\n";
          break;
        case DcmOutcome::Kind::RunningBeyondBound:
          std::cout << "Running beyond " << out.steps << " steps, N=" << out.max_occupancy
                    << "\n";
          break;
      }
      return kExitTrue;
    }

    if (*eo_cmd) {
      ChannelMachine S = parse_dcm(slurp(machine_file));
      OmegaEncoding enc = encode_omega(S);
      spit(dcm_out + "_omega.txt", print_formula(enc.omega) + "\n");
      spit(dcm_out + "_omega_live.txt", print_formula(enc.omega_live) + "\n");
      std::cout << "wrote " << dcm_out << "_omega.txt and " << dcm_out
                << "_omega_live.txt\n";
      return kExitTrue;
    }

    if (*ep_cmd) {
      ChannelMachine S = parse_dcm(slurp(machine_file));
      PlantEncoding enc = encode_plant(S);
      spit(dcm_out + "_plant.txt", print_sts(enc.plant));
      spit(dcm_out + "_psi0.txt", print_formula(enc.psi0) + "\n");
      spit(dcm_out + "_psi0_live.txt", print_formula(enc.psi0_live) + "\n");
      std::cout << "wrote " << dcm_out << "_plant.txt, " << dcm_out << "_psi0.txt, "
                << dcm_out << "_psi0_live.txt\n";
      return kExitTrue;
    }

    if (*vp_cmd) {
      ChannelMachine S = parse_dcm(slurp(machine_file));
      TimedWord w = parse_timed_word(slurp(word_file));
      PlayReport r = validate_play(S, w);
      auto line = [](const char* name, bool ok) {
        std::cout << name << ": " << (ok ? "pass" : "fail") << "\n";
      };
      line("transitions", r.c1);
      line("timing discipline", r.c2);
      line("reads matched", r.c3);
      line("writes consumed", r.c4);
      return r.all() ? kExitTrue : kExitFalse;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
