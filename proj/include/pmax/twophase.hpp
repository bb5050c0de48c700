#pragma once

#include <functional>
#include <optional>

#include "pmax/diffusion.hpp"
#include "pmax/graph.hpp"
#include "pmax/selection.hpp"

namespace pmax {

enum class Phase2Mode {
  PerReplication,  // reselect phase-2 seeds for every observed realization
  Frozen           // select once on the first realization, reuse everywhere
};

struct TwoPhaseConfig {
  double total_budget = 0.0;
  double split_ratio = 0.5;  // B1 = ratio * B, B2 = B - B1
  int timestep = 1;
  Algorithm algorithm = Algorithm::SimpleGreedy;
  double epsilon = 0.1;
  int64_t estimator_samples = 10000;
  int replications = 50;
  uint64_t master_seed = 1;
  Phase2Mode phase2_mode = Phase2Mode::PerReplication;
  int threads = 0;
  bool with_single_phase_baseline = false;
};

// Test hook: overrides the phase-2 selection. Receives the replicate stream
// (which fixes the realization's edge outcomes) and the observation.
using Phase2Policy = std::function<std::vector<NodeId>(
    const RngStream& replicate, const PartialObservation& obs, double budget)>;

struct SinglePhaseResult {
  SeedSelection seeds;
  Estimate profit;
  double mean_rounds = 0.0;
  double selection_seconds = 0.0;
  double simulation_seconds = 0.0;
};

struct TwoPhaseResult {
  SeedSelection s1;
  // structural fields from the last replication
  size_t observed_active = 0;
  size_t observed_recent = 0;
  size_t tried_edges = 0;
  SeedSelection s2;
  Estimate realized_profit;
  std::optional<SinglePhaseResult> single_phase;  // same algorithm, full budget
  double mean_rounds_phase1 = 0.0;
  double mean_rounds_total = 0.0;
  double mean_seed_count = 0.0;  // |s1| + mean |s2|
  double selection_seconds = 0.0;
  double simulation_seconds = 0.0;
};

SinglePhaseResult run_single_phase(const SocialNetwork& g, const NodeEconomics& econ,
                                   double budget, Algorithm algo, const TwoPhaseConfig& knobs);

TwoPhaseResult run_two_phase(const SocialNetwork& g, const NodeEconomics& econ,
                             const TwoPhaseConfig& config,
                             const Phase2Policy* policy_override = nullptr,
                             std::optional<std::vector<NodeId>> forced_s1 = std::nullopt);

}  // namespace pmax
