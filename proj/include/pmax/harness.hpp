#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmax/json_io.hpp"
#include "pmax/twophase.hpp"

namespace pmax {

struct ExperimentGrid {
  std::vector<double> budgets = {500, 1000, 1500, 2000, 2500};
  std::vector<double> split_ratios = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<int> timesteps = {2, 4, 6, 8, 10};
  std::vector<Algorithm> algorithms = {Algorithm::SimpleGreedy, Algorithm::DoubleGreedy,
                                       Algorithm::StochasticGreedy, Algorithm::HighDegree,
                                       Algorithm::SingleDiscount, Algorithm::DegreeDiscount,
                                       Algorithm::HighClusteringCoefficient, Algorithm::Random};
  std::vector<double> epsilons = {0.01, 0.1, 0.3, 0.6};  // StG only
  int replications = 50;
  int64_t estimator_samples = 10000;
  uint64_t master_seed = 1;
  Phase2Mode phase2_mode = Phase2Mode::Frozen;
  int workers = 0;  // grid-cell parallelism; 0 = library default
};

struct ResultRow {
  std::string dataset;
  std::string algorithm;
  double budget = 0;
  double split_ratio = 0;   // 0 for single-phase rows
  int timestep = 0;         // 0 for single-phase rows
  std::optional<double> epsilon;
  std::string mode;  // "single" | "two_phase"
  double profit_mean = 0;
  double profit_stderr = 0;
  double seed_set_size = 0;
  double diffusion_rounds = 0;
  double wall_time_seconds = 0;
  int64_t estimator_samples = 0;
  int replications = 0;
  uint64_t master_seed = 0;
  std::string error;  // empty on success

  static std::string csv_header();
  std::string csv_line() const;
};

struct GridOutputs {
  std::string master_csv;
  std::vector<std::string> rq_csvs;
};

GridOutputs run_grid(const Instance& inst, const ExperimentGrid& grid,
                     const std::string& out_prefix);

struct ImprovementSummary {
  std::string dataset;
  std::string algorithm;
  int cells = 0;
  double positive_fraction = 0;
  double median_improvement_pct = 0;
  double max_improvement_pct = 0;
};

std::vector<ImprovementSummary> report_improvements(const std::string& master_csv_path);
std::string format_improvement_report(const std::vector<ImprovementSummary>& summaries);

// One whitespace-delimited .dat per RQ CSV, gnuplot-ready; idempotent.
std::string emit_plot_data(const std::string& rq_csv_path);

// CSV helpers shared by the report/plot stages.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace pmax
