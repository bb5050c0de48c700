#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmax/graph.hpp"

namespace pmax {

// Exact computation over all 2^m edge realizations. Usable for small
// instances only; every operation refuses m above the cap.
constexpr int kEnumerationEdgeCap = 22;
constexpr int kPhase2CandidateCap = 20;

using LiveGraphMask = uint32_t;  // bit i set <=> edge i realized

double live_graph_probability(const SocialNetwork& g, LiveGraphMask mask);

std::vector<NodeId> exact_reachable(const SocialNetwork& g, LiveGraphMask mask,
                                    std::span<const NodeId> seeds);

// Expected benefit of the reachable set minus seed cost, enumerated exactly.
double exact_profit(const SocialNetwork& g, const NodeEconomics& econ,
                    std::span<const NodeId> seeds, int threads = 0);

// Phase-2 completion chosen per realization: among affordable seed sets drawn
// from the non-active nodes, maximize the number of newly activated nodes,
// spend when any candidate is affordable, break ties lexicographically.
struct Phase2Choice {
  std::vector<NodeId> seeds;
  int newly_activated = 0;
};

struct TwoPhaseRow {
  LiveGraphMask mask;
  double prob;
  std::vector<NodeId> already_active;   // after d rounds from s1
  std::vector<NodeId> recently_active;  // activated at round d
  std::vector<NodeId> phase2_seeds;
  double profit;        // whole-graph profit of s1 ∪ s2 on this realization
  double contribution;  // prob * profit
};

struct TwoPhaseTable {
  std::vector<TwoPhaseRow> rows;
  double total = 0.0;
};

// Expected final profit when phase-2 seeds are chosen by the completion rule
// after observing d rounds from s1. b2 is the phase-2 budget as given; any
// phase-1 residual the caller wants to roll over must be added by the caller.
double exact_two_phase_objective(const SocialNetwork& g, const NodeEconomics& econ,
                                 std::span<const NodeId> s1, int d, double b2, int threads = 0);

TwoPhaseTable exact_two_phase_table(const SocialNetwork& g, const NodeEconomics& econ,
                                    std::span<const NodeId> s1, int d, double b2);

// Observation groups: realizations that are indistinguishable after d rounds
// from s1 (same active sets and same tried-edge outcomes).
struct ObservationGroup {
  std::string key;
  double prob = 0.0;                    // P(Y)
  std::vector<LiveGraphMask> members;   // realizations in this group
  double conditional_value = 0.0;       // sum over members of P(G|Y) * profit
};

std::vector<ObservationGroup> group_by_observation(const SocialNetwork& g,
                                                   const NodeEconomics& econ,
                                                   std::span<const NodeId> s1, int d, double b2);

// --- structural checks used by the `verify-lemmas` command and tests -------

struct SignCheckReport {
  double positive_value = 0.0;
  double negative_value = 0.0;
  bool ok = false;
};

struct InstanceSpec {
  SocialNetwork network;
  NodeEconomics econ;
  int timestep = 1;
  double b2 = 1.0;
};

SignCheckReport verify_sign_lemma(const InstanceSpec& positive, const InstanceSpec& negative);

struct MonotonicityWitness {
  std::vector<NodeId> base;
  NodeId increasing_node;  // f(base ∪ {increasing_node}) > f(base)
  NodeId decreasing_node;  // f(base ∪ {decreasing_node}) < f(base)
  double f_base, f_up, f_down;
};

std::optional<MonotonicityWitness> find_nonmonotone_witness(const InstanceSpec& inst);

struct ModularityWitness {
  // submodularity violated: f(S+i)-f(S) < f(T+i)-f(T) with S ⊂ T
  std::vector<NodeId> sub_s, sub_t;
  NodeId sub_i;
  // supermodularity violated: f(S+i)-f(S) > f(T+i)-f(T)
  std::vector<NodeId> super_s, super_t;
  NodeId super_i;
};

std::optional<ModularityWitness> find_nonsubmodular_witness(const InstanceSpec& inst);

struct SubadditivityReport {
  int checked = 0;
  int skipped = 0;  // pairs with a negative-valued side, outside the lemma's domain
  int violations = 0;
  double worst_slack = 0.0;  // min over checked of f(M)+f(N)-f(M∪N)
};

SubadditivityReport check_subadditivity(const InstanceSpec& inst, int trials, uint64_t seed);

}  // namespace pmax
