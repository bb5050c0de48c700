#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pmax/demo.hpp"
#include "pmax/harness.hpp"
#include "pmax/json_io.hpp"
#include "pmax/oracle.hpp"

using namespace pmax;

namespace {

std::vector<Algorithm> parse_algos(const std::string& csv) {
  std::vector<Algorithm> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_algorithm(tok));
  if (out.empty()) throw std::invalid_argument("no algorithms given");
  return out;
}

Instance demo_instance(const std::string& name) {
  InstanceSpec spec;
  if (name == "branch4") spec = demo::branch4();
  else if (name == "branch4-gain") spec = demo::branch4_gain();
  else if (name == "branch4-loss") spec = demo::branch4_loss();
  else if (name == "tree6") spec = demo::tree6();
  else throw std::invalid_argument("unknown demo instance: " + name);
  Instance inst;
  inst.network = spec.network;
  inst.econ = spec.econ;
  inst.name = name;
  inst.scheme = "demo";
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted two-phase profit maximization on directed social networks"};
  app.require_subcommand(1);

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "normalize an edge list and report its shape");
  std::string in_path, out_path;
  bool symmetrize = false, keep_self_loops = false, no_relabel = false;
  ingest->add_option("edges", in_path, "edge list file: 'src dst [prob]' per line")->required();
  ingest->add_option("--out", out_path, "write normalized instance JSON (without economics)");
  ingest->add_flag("--symmetrize", symmetrize, "add the reverse of every edge");
  ingest->add_flag("--keep-self-loops", keep_self_loops);
  ingest->add_flag("--no-relabel", no_relabel);

  // ---- assign ----
  auto* assign = app.add_subcommand("assign", "assign probabilities, costs and benefits");
  std::string a_edges, a_out, scheme = "trivalency";
  double const_p = 0.1, cost_lo = 50, cost_hi = 100, ben_lo = 800, ben_hi = 1000;
  uint64_t a_seed = 1;
  bool a_symmetrize = false;
  assign->add_option("edges", a_edges)->required();
  assign->add_option("--out", a_out, "instance JSON output")->required();
  assign->add_option("--scheme", scheme, "trivalency|constant|from-file");
  assign->add_option("--p", const_p, "probability for the constant scheme");
  assign->add_option("--cost-lo", cost_lo);
  assign->add_option("--cost-hi", cost_hi);
  assign->add_option("--benefit-lo", ben_lo);
  assign->add_option("--benefit-hi", ben_hi);
  assign->add_option("--seed", a_seed);
  assign->add_flag("--symmetrize", a_symmetrize);

  // ---- oracle ----
  auto* oracle = app.add_subcommand("oracle", "exact two-phase table for a small instance");
  std::string o_instance, o_demo, o_seeds = "0";
  int o_d = 1;
  double o_b2 = 1.0;
  oracle->add_option("--instance", o_instance, "instance JSON path");
  oracle->add_option("--demo", o_demo, "bundled instance: branch4|branch4-gain|branch4-loss|tree6");
  oracle->add_option("--s1", o_seeds, "comma-separated phase-1 seed ids");
  oracle->add_option("--timestep", o_d);
  oracle->add_option("--b2", o_b2, "phase-2 budget");

  // ---- verify-lemmas ----
  auto* lemmas = app.add_subcommand("verify-lemmas", "objective structure checks on bundled instances");
  int l_trials = 200;
  uint64_t l_seed = 7;
  lemmas->add_option("--trials", l_trials);
  lemmas->add_option("--seed", l_seed);

  // ---- run-single / run-two-phase ----
  auto* runs = app.add_subcommand("run-single", "single-phase run on an instance");
  auto* runt = app.add_subcommand("run-two-phase", "two-phase run on an instance");
  std::string r_instance;
  double r_budget = 500, r_split = 0.5;
  int r_timestep = 2;
  std::string r_algo = "SG";
  double r_eps = 0.1;
  int64_t r_samples = 10000;
  int r_reps = 50;
  uint64_t r_seed = 1;
  bool r_frozen = false;
  for (CLI::App* sub : {runs, runt}) {
    sub->add_option("--instance", r_instance)->required();
    sub->add_option("--budget", r_budget);
    sub->add_option("--algo", r_algo);
    sub->add_option("--epsilon", r_eps);
    sub->add_option("--samples", r_samples);
    sub->add_option("--reps", r_reps);
    sub->add_option("--seed", r_seed);
  }
  runt->add_option("--split", r_split, "phase-1 budget fraction");
  runt->add_option("--timestep", r_timestep);
  runt->add_flag("--frozen-s2", r_frozen, "select phase-2 seeds once instead of per replication");

  // ---- grid ----
  auto* gridc = app.add_subcommand("grid", "full experiment grid -> CSV files");
  std::string g_instance, g_out = "grid";
  std::string g_budgets = "500,1000,1500,2000,2500", g_splits = "0.1,0.3,0.5,0.7,0.9",
              g_timesteps = "2,4,6,8,10", g_algos = "SG,DG,StG,HD,SD,DD,HighCC,Random",
              g_eps = "0.01,0.1,0.3,0.6";
  int64_t g_samples = 10000;
  int g_reps = 50, g_workers = 0;
  uint64_t g_seed = 1;
  bool g_per_rep = false;
  gridc->add_option("--instance", g_instance)->required();
  gridc->add_option("--out", g_out, "output prefix");
  gridc->add_option("--budget", g_budgets, "comma list");
  gridc->add_option("--split", g_splits, "comma list");
  gridc->add_option("--timestep", g_timesteps, "comma list");
  gridc->add_option("--algo", g_algos, "comma list");
  gridc->add_option("--epsilon", g_eps, "comma list for StG");
  gridc->add_option("--samples", g_samples);
  gridc->add_option("--reps", g_reps);
  gridc->add_option("--seed", g_seed);
  gridc->add_option("--workers", g_workers);
  gridc->add_flag("--per-replication-s2", g_per_rep,
                  "reselect phase-2 seeds per replication (slower, faithful)");

  // ---- report ----
  auto* report = app.add_subcommand("report", "improvement summary + plot data from grid CSVs");
  std::string rep_master;
  bool rep_plots = false;
  report->add_option("--master", rep_master, "master CSV path")->required();
  report->add_flag("--plots", rep_plots, "emit .dat files next to the per-question CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      IngestOptions opt;
      opt.symmetrize = symmetrize;
      opt.drop_self_loops = !keep_self_loops;
      opt.relabel = !no_relabel;
      IngestResult res = ingest_edge_list(in_path, opt);
      std::printf("nodes %u edges %u self_loops_dropped %llu duplicates_dropped %llu\n",
                  res.network.node_count(), res.network.edge_count(),
                  (unsigned long long)res.report.self_loops_dropped,
                  (unsigned long long)res.report.duplicates_dropped);
      if (!out_path.empty()) {
        Instance inst;
        inst.network = res.network;
        inst.econ.cost.assign(res.network.node_count(), 1.0);
        inst.econ.benefit.assign(res.network.node_count(), 0.0);
        inst.name = in_path;
        inst.scheme = "structure-only";
        save_instance(inst, out_path);
      }
    } else if (*assign) {
      IngestOptions opt;
      opt.symmetrize = a_symmetrize;
      IngestResult res = ingest_edge_list(a_edges, opt);
      AssignmentSpec spec;
      if (scheme == "trivalency") spec.weighting = WeightScheme::Trivalency;
      else if (scheme == "constant") spec.weighting = WeightScheme::Constant;
      else if (scheme == "from-file") spec.weighting = WeightScheme::FromFile;
      else throw std::invalid_argument("unknown scheme: " + scheme);
      spec.constant_p = const_p;
      spec.cost_lo = cost_lo;
      spec.cost_hi = cost_hi;
      spec.benefit_lo = ben_lo;
      spec.benefit_hi = ben_hi;
      spec.master_seed = a_seed;
      Instance inst;
      inst.network = assign_weights(res.network, spec);
      inst.econ = assign_economics(res.network, spec);
      inst.seed = a_seed;
      inst.scheme = scheme;
      inst.name = a_edges;
      save_instance(inst, a_out);
      std::printf("instance written to %s (n=%u m=%u)\n", a_out.c_str(),
                  inst.network.node_count(), inst.network.edge_count());
    } else if (*oracle) {
      Instance inst = !o_demo.empty() ? demo_instance(o_demo) : load_instance(o_instance);
      std::vector<NodeId> s1;
      std::stringstream ss(o_seeds);
      std::string tok;
      while (std::getline(ss, tok, ',')) s1.push_back(static_cast<NodeId>(std::stoul(tok)));
      TwoPhaseTable table = exact_two_phase_table(inst.network, inst.econ, s1, o_d, o_b2);
      std::printf("mask,prob,active,recent,phase2_seeds,profit,contribution\n");
      auto join = [](const std::vector<NodeId>& v) {
        std::string s;
        for (NodeId u : v) s += (s.empty() ? "" : " ") + std::to_string(u);
        return s.empty() ? "-" : s;
      };
      for (const TwoPhaseRow& row : table.rows)
        std::printf("%u,%.12g,%s,%s,%s,%.12g,%.12g\n", row.mask, row.prob,
                    join(row.already_active).c_str(), join(row.recently_active).c_str(),
                    join(row.phase2_seeds).c_str(), row.profit, row.contribution);
      std::printf("total,%.12g\n", table.total);
    } else if (*lemmas) {
      SignCheckReport sign = verify_sign_lemma(demo::branch4_gain(), demo::branch4_loss());
      std::printf("sign check: positive=%.6g negative=%.6g -> %s\n", sign.positive_value,
                  sign.negative_value, sign.ok ? "ok" : "FAILED");
      auto mono = find_nonmonotone_witness(demo::branch4());
      if (mono)
        std::printf("non-monotone: f(base)=%.6g up(node %u)=%.6g down(node %u)=%.6g\n",
                    mono->f_base, mono->increasing_node, mono->f_up, mono->decreasing_node,
                    mono->f_down);
      else
        std::printf("non-monotone: NO WITNESS\n");
      auto modw = find_nonsubmodular_witness(demo::branch4());
      std::printf("modularity: %s\n", modw ? "both directions violated (witness found)"
                                           : "NO WITNESS");
      SubadditivityReport sub = check_subadditivity(demo::branch4(), l_trials, l_seed);
      std::printf("subadditivity: checked=%d skipped=%d violations=%d worst_slack=%.6g\n",
                  sub.checked, sub.skipped, sub.violations, sub.worst_slack);
      bool ok = sign.ok && mono && modw && sub.violations == 0;
      return ok ? 0 : 1;
    } else if (*runs || *runt) {
      Instance inst = load_instance(r_instance);
      TwoPhaseConfig cfg;
      cfg.total_budget = r_budget;
      cfg.algorithm = parse_algorithm(r_algo);
      cfg.epsilon = r_eps;
      cfg.estimator_samples = r_samples;
      cfg.replications = r_reps;
      cfg.master_seed = r_seed;
      if (*runs) {
        SinglePhaseResult sp = run_single_phase(inst.network, inst.econ, r_budget, cfg.algorithm, cfg);
        std::printf("profit %.6g +- %.6g  seeds %zu  rounds %.2f  select %.2fs sim %.2fs\n",
                    sp.profit.mean, sp.profit.stderr_, sp.seeds.nodes.size(), sp.mean_rounds,
                    sp.selection_seconds, sp.simulation_seconds);
      } else {
        cfg.split_ratio = r_split;
        cfg.timestep = r_timestep;
        cfg.phase2_mode = r_frozen ? Phase2Mode::Frozen : Phase2Mode::PerReplication;
        cfg.with_single_phase_baseline = true;
        TwoPhaseResult tp = run_two_phase(inst.network, inst.econ, cfg);
        std::printf("two-phase profit %.6g +- %.6g  (s2 mode: %s)\n", tp.realized_profit.mean,
                    tp.realized_profit.stderr_, r_frozen ? "frozen" : "per-replication");
        std::printf("  s1 %zu nodes cost %.4g | observed active %zu recent %zu tried %zu\n",
                    tp.s1.nodes.size(), tp.s1.total_cost, tp.observed_active, tp.observed_recent,
                    tp.tried_edges);
        std::printf("  rounds phase1 %.2f total %.2f  mean seeds %.2f\n", tp.mean_rounds_phase1,
                    tp.mean_rounds_total, tp.mean_seed_count);
        if (tp.single_phase)
          std::printf("  single-phase profit %.6g +- %.6g (same algorithm, full budget)\n",
                      tp.single_phase->profit.mean, tp.single_phase->profit.stderr_);
      }
    } else if (*gridc) {
      Instance inst = load_instance(g_instance);
      if (inst.name.empty()) inst.name = g_instance;
      ExperimentGrid grid;
      auto parse_doubles = [](const std::string& csv) {
        std::vector<double> out;
        std::stringstream ss(csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
      };
      auto parse_ints = [](const std::string& csv) {
        std::vector<int> out;
        std::stringstream ss(csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
        return out;
      };
      grid.budgets = parse_doubles(g_budgets);
      grid.split_ratios = parse_doubles(g_splits);
      grid.timesteps = parse_ints(g_timesteps);
      grid.algorithms = parse_algos(g_algos);
      grid.epsilons = parse_doubles(g_eps);
      if (inst.network.node_count() > 10000 && gridc->count("--algo") == 0) {
        // very large networks: full greedy sweeps are impractical, default to
        // the sampled greedy at the coarse accuracy settings
        grid.algorithms = {Algorithm::StochasticGreedy};
        if (gridc->count("--epsilon") == 0) grid.epsilons = {0.3, 0.6};
        std::fprintf(stderr,
                     "note: %u nodes; defaulting to StG with epsilon {0.3,0.6} "
                     "(override with --algo/--epsilon)\n",
                     inst.network.node_count());
      }
      grid.estimator_samples = g_samples;
      grid.replications = g_reps;
      grid.master_seed = g_seed;
      grid.workers = g_workers;
      grid.phase2_mode = g_per_rep ? Phase2Mode::PerReplication : Phase2Mode::Frozen;
      GridOutputs out = run_grid(inst, grid, g_out);
      std::printf("master: %s\n", out.master_csv.c_str());
      for (const auto& p : out.rq_csvs) std::printf("pivot:  %s\n", p.c_str());
    } else if (*report) {
      auto summaries = report_improvements(rep_master);
      std::fputs(format_improvement_report(summaries).c_str(), stdout);
      if (rep_plots) {
        std::string prefix = rep_master;
        auto pos = prefix.rfind("_master.csv");
        if (pos != std::string::npos) prefix = prefix.substr(0, pos);
        for (const char* rq : {"rq1", "rq2", "rq3", "rq4", "rq5", "rq6", "rq7"}) {
          std::string csv = prefix + "_" + rq + ".csv";
          std::ifstream probe(csv);
          if (probe) std::printf("plot data: %s\n", emit_plot_data(csv).c_str());
        }
      }
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
