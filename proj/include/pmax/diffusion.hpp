#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pmax/graph.hpp"
#include "pmax/rng.hpp"

namespace pmax {

// Ordered seed set with its accounting.
struct SeedSelection {
  std::vector<NodeId> nodes;  // selection order preserved
  double total_cost = 0.0;
  double budget = 0.0;
};

// State of a diffusion observed at a timestep: active sets plus the status of
// every edge attempted so far. Attempted edges are never retried, so the pair
// (live_edges, failed_edges) is exactly the evidence that conditions phase two.
struct PartialObservation {
  std::vector<NodeId> already_active;   // A
  std::vector<NodeId> recently_active;  // newly active at `timestep`
  std::vector<EdgeId> live_edges;
  std::vector<EdgeId> failed_edges;
  int timestep = 0;
  int rounds_run = 0;  // rounds actually executed (< timestep when quiescent early)
};

struct DiffusionOutcome {
  std::vector<NodeId> activated;
  int rounds = 0;
  std::vector<std::vector<NodeId>> newly_active_per_round;
};

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int64_t samples = 0;
};

// Edge outcomes are a pure function of (stream, edge id): one Bernoulli draw
// per edge per replicate, shared by both phases of a run. This realizes the
// live-graph view of the cascade model and gives common random numbers for
// paired evaluations for free.
inline bool edge_live(const RngStream& replicate, const SocialNetwork& g, EdgeId e) {
  return replicate.u01(e) < g.edge(e).prob;
}

DiffusionOutcome simulate_ic(const SocialNetwork& g, std::span<const NodeId> seeds,
                             const RngStream& replicate);

PartialObservation simulate_to_timestep(const SocialNetwork& g, std::span<const NodeId> seeds,
                                        int d, const RngStream& replicate);

DiffusionOutcome continue_diffusion(const SocialNetwork& g, const PartialObservation& obs,
                                    std::span<const NodeId> extra_seeds,
                                    const RngStream& replicate);

// Deterministic sum regardless of accumulation threads: pairwise over a
// fixed-order buffer.
double pairwise_sum(std::span<const double> xs);

Estimate summarize(std::span<const double> xs);

Estimate estimate_profit(const SocialNetwork& g, const NodeEconomics& econ,
                         std::span<const NodeId> seeds, int64_t samples, uint64_t master_seed,
                         int threads = 0);

double marginal_profit_gain(const SocialNetwork& g, const NodeEconomics& econ,
                            std::span<const NodeId> current, NodeId candidate, int64_t samples,
                            uint64_t master_seed, int threads = 0);

}  // namespace pmax
