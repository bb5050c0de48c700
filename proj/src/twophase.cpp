#include "pmax/twophase.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace pmax {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double benefit_of(const NodeEconomics& econ, std::span<const NodeId> nodes) {
  double b = 0;
  for (NodeId u : nodes) b += econ.benefit[u];
  return b;
}

}  // namespace

SinglePhaseResult run_single_phase(const SocialNetwork& g, const NodeEconomics& econ,
                                   double budget, Algorithm algo, const TwoPhaseConfig& knobs) {
  SinglePhaseResult res;
  auto t0 = std::chrono::steady_clock::now();
  NetworkView full(g, {});
  SelectionContext ctx{&full,   &econ,         budget,       knobs.estimator_samples,
                       knobs.master_seed, knobs.epsilon, std::nullopt, knobs.threads};
  res.seeds = select_seeds(ctx, algo);
  res.selection_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  RngStream root = RngStream(knobs.master_seed).child("sp");
  std::vector<double> profits(static_cast<size_t>(knobs.replications));
  double rounds = 0;
  for (int r = 0; r < knobs.replications; ++r) {
    DiffusionOutcome out = simulate_ic(g, res.seeds.nodes, root.child(static_cast<uint64_t>(r)));
    profits[static_cast<size_t>(r)] = benefit_of(econ, out.activated) - res.seeds.total_cost;
    rounds += out.rounds;
  }
  res.profit = summarize(profits);
  res.mean_rounds = knobs.replications ? rounds / knobs.replications : 0;
  res.simulation_seconds = seconds_since(t0);
  return res;
}

TwoPhaseResult run_two_phase(const SocialNetwork& g, const NodeEconomics& econ,
                             const TwoPhaseConfig& config, const Phase2Policy* policy_override,
                             std::optional<std::vector<NodeId>> forced_s1) {
  if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0))
    throw std::invalid_argument("split ratio must be in (0,1)");
  if (config.timestep < 0) throw std::invalid_argument("timestep must be >= 0");
  if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");

  const double b1 = config.split_ratio * config.total_budget;
  const double b2 = config.total_budget - b1;

  TwoPhaseResult res;
  auto t0 = std::chrono::steady_clock::now();

  // Phase-1 seeds are chosen once: they cannot depend on randomness that has
  // not been realized yet.
  if (forced_s1) {
    res.s1.nodes = *forced_s1;
    res.s1.budget = b1;
    for (NodeId u : res.s1.nodes) res.s1.total_cost += econ.cost[u];
  } else {
    NetworkView full(g, {});
    SelectionContext ctx{&full,
                         &econ,
                         b1,
                         config.estimator_samples,
                         RngStream(config.master_seed).child("p1").state(),
                         config.epsilon,
                         std::nullopt,
                         config.threads};
    res.s1 = select_seeds(ctx, config.algorithm);
  }
  const double carry = std::max(0.0, b1 - res.s1.total_cost);  // unspent phase-1 budget
  const double b2_effective = b2 + carry;
  double selection_seconds = seconds_since(t0);

  RngStream tp = RngStream(config.master_seed).child("tp");
  std::vector<double> profits(static_cast<size_t>(config.replications));
  double rounds1 = 0, rounds_total = 0, seeds2 = 0;
  double sim_seconds = 0, sel2_seconds = 0;

  std::optional<std::vector<NodeId>> frozen_s2;

  for (int r = 0; r < config.replications; ++r) {
    RngStream rep = tp.child(static_cast<uint64_t>(r));
    RngStream phase1_stream = rep.child("phase1");

    auto ts = std::chrono::steady_clock::now();
    PartialObservation obs = simulate_to_timestep(g, res.s1.nodes, config.timestep, phase1_stream);
    sim_seconds += seconds_since(ts);

    std::vector<NodeId> s2_nodes;
    ts = std::chrono::steady_clock::now();
    if (policy_override) {
      s2_nodes = (*policy_override)(phase1_stream, obs, b2_effective);
    } else if (config.phase2_mode == Phase2Mode::Frozen && frozen_s2) {
      for (NodeId u : *frozen_s2) {
        bool active = std::binary_search(obs.already_active.begin(), obs.already_active.end(), u);
        if (!active) s2_nodes.push_back(u);
      }
      // dropped seeds were still purchased; cost accounting below uses the
      // frozen set, not the surviving one
    } else {
      NetworkView residual(g, obs.already_active);
      SelectionContext ctx{&residual,
                           &econ,
                           b2_effective,
                           config.estimator_samples,
                           rep.child("p2").state(),
                           config.epsilon,
                           std::nullopt,
                           config.threads};
      SeedSelection s2 = select_seeds(ctx, config.algorithm);
      s2_nodes = s2.nodes;
      if (config.phase2_mode == Phase2Mode::Frozen) frozen_s2 = s2_nodes;
    }
    sel2_seconds += seconds_since(ts);

    ts = std::chrono::steady_clock::now();
    DiffusionOutcome fin = continue_diffusion(g, obs, s2_nodes, phase1_stream);
    sim_seconds += seconds_since(ts);

    const std::vector<NodeId>& paid_s2 =
        (config.phase2_mode == Phase2Mode::Frozen && frozen_s2) ? *frozen_s2 : s2_nodes;
    double cost2 = 0;
    for (NodeId u : paid_s2) cost2 += econ.cost[u];
    profits[static_cast<size_t>(r)] =
        benefit_of(econ, fin.activated) - res.s1.total_cost - cost2;

    rounds1 += obs.rounds_run;
    rounds_total += obs.rounds_run + fin.rounds;
    seeds2 += static_cast<double>(s2_nodes.size());

    if (r == config.replications - 1) {
      res.observed_active = obs.already_active.size();
      res.observed_recent = obs.recently_active.size();
      res.tried_edges = obs.live_edges.size() + obs.failed_edges.size();
      res.s2.nodes = paid_s2;
      res.s2.budget = b2_effective;
      res.s2.total_cost = cost2;
    }
  }

  res.realized_profit = summarize(profits);
  res.mean_rounds_phase1 = rounds1 / config.replications;
  res.mean_rounds_total = rounds_total / config.replications;
  res.mean_seed_count = static_cast<double>(res.s1.nodes.size()) + seeds2 / config.replications;
  res.selection_seconds = selection_seconds + sel2_seconds;
  res.simulation_seconds = sim_seconds;

  if (config.with_single_phase_baseline) {
    TwoPhaseConfig knobs = config;
    res.single_phase = run_single_phase(g, econ, config.total_budget, config.algorithm, knobs);
  }
  return res;
}

}  // namespace pmax
