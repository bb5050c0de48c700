#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmax/diffusion.hpp"
#include "pmax/graph.hpp"

namespace pmax {

enum class Algorithm { SimpleGreedy, DoubleGreedy, StochasticGreedy, HighDegree, SingleDiscount,
                       DegreeDiscount, HighClusteringCoefficient, Random };

// CLI/config names: SG, DG, StG, HD, SD, DD, HighCC, Random
std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct SelectionContext {
  const NetworkView* view;
  const NodeEconomics* econ;
  double budget = 0.0;
  int64_t estimator_samples = 10000;
  uint64_t master_seed = 1;
  double epsilon = 0.1;                  // StG accuracy-efficiency trade-off
  std::optional<double> discount_p;      // DD probability; view mean when unset
  int threads = 0;
};

// Profit queries used by the greedy selectors. A tag selects the replicate
// family, so evaluations sharing a tag share random numbers.
class ProfitEstimator {
 public:
  virtual ~ProfitEstimator() = default;
  // marginal gains of each candidate w.r.t. `current`
  virtual std::vector<double> gains(std::span<const NodeId> current,
                                    std::span<const NodeId> candidates, uint64_t tag) = 0;
  virtual double profit(std::span<const NodeId> seeds, uint64_t tag) = 0;
};

std::unique_ptr<ProfitEstimator> make_mc_estimator(const NetworkView& view,
                                                   const NodeEconomics& econ, int64_t samples,
                                                   uint64_t master_seed, int threads = 0);

// Exact enumeration over the view; only for small instances.
std::unique_ptr<ProfitEstimator> make_exact_estimator(const NetworkView& view,
                                                      const NodeEconomics& econ);

struct SelectionTrace {
  int additions = 0;
  int estimator_batches = 0;
  int pair_evaluations = 0;      // double greedy: one per candidate
  int skipped_unaffordable = 0;  // argmax hits dropped for cost
  size_t final_t_size = 0;       // double greedy's shrinking set at exit
  bool s_subset_of_t = true;
};

SeedSelection simple_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                            SelectionTrace* trace = nullptr);
SeedSelection stochastic_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                                SelectionTrace* trace = nullptr);
SeedSelection double_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                            SelectionTrace* trace = nullptr);
SeedSelection high_degree(const SelectionContext& ctx);
SeedSelection single_discount(const SelectionContext& ctx);
SeedSelection degree_discount(const SelectionContext& ctx);
SeedSelection high_clustering_coefficient(const SelectionContext& ctx);
SeedSelection random_selection(const SelectionContext& ctx);

// Dispatch by algorithm; constructs a Monte Carlo estimator when one is
// needed and none is supplied.
SeedSelection select_seeds(const SelectionContext& ctx, Algorithm algo,
                           ProfitEstimator* est = nullptr, SelectionTrace* trace = nullptr);

// Sample size used by stochastic greedy at one iteration.
int64_t stochastic_sample_size(int64_t candidate_count, double budget, double mean_cost,
                               double epsilon);

}  // namespace pmax
