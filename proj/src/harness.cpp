#include "pmax/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "pmax/rng.hpp"

namespace pmax {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string algo_label(Algorithm a, std::optional<double> eps) {
  std::string s = algorithm_name(a);
  if (a == Algorithm::StochasticGreedy && eps) s += fmt(*eps);
  return s;
}

uint64_t cell_seed(uint64_t master, const std::string& dataset, const std::string& algo,
                   double budget, double ratio, int timestep, double eps) {
  uint64_t h = hash_combine(master, hash_str(dataset));
  h = hash_combine(h, hash_str(algo));
  h = hash_combine(h, static_cast<uint64_t>(budget * 1024));
  h = hash_combine(h, static_cast<uint64_t>(ratio * 1024));
  h = hash_combine(h, static_cast<uint64_t>(timestep));
  h = hash_combine(h, static_cast<uint64_t>(eps * 1024));
  return h;
}

struct CellSpec {
  Algorithm algo;
  std::optional<double> epsilon;
  double budget;
  double split_ratio;  // <0 for single-phase cells
  int timestep;
  bool single;
};

}  // namespace

std::string ResultRow::csv_header() {
  return "dataset,algorithm,budget,split_ratio,timestep,epsilon,mode,profit_mean,profit_stderr,"
         "seed_set_size,diffusion_rounds,wall_time_seconds,estimator_samples,replications,"
         "master_seed,error";
}

std::string ResultRow::csv_line() const {
  std::ostringstream ss;
  ss << dataset << ',' << algorithm << ',' << fmt(budget) << ',' << fmt(split_ratio) << ','
     << timestep << ',' << (epsilon ? fmt(*epsilon) : std::string()) << ',' << mode << ','
     << fmt(profit_mean) << ',' << fmt(profit_stderr) << ',' << fmt(seed_set_size) << ','
     << fmt(diffusion_rounds) << ',' << fmt(wall_time_seconds) << ',' << estimator_samples << ','
     << replications << ',' << master_seed << ',' << error;
  return ss.str();
}

GridOutputs run_grid(const Instance& inst, const ExperimentGrid& grid,
                     const std::string& out_prefix) {
  if (grid.budgets.empty() || grid.split_ratios.empty() || grid.timesteps.empty() ||
      grid.algorithms.empty())
    throw std::invalid_argument("grid lists must be non-empty");
  for (double r : grid.split_ratios)
    if (!(r > 0 && r < 1)) throw std::invalid_argument("split ratios must be in (0,1)");
  for (int t : grid.timesteps)
    if (t < 1) throw std::invalid_argument("timesteps must be >= 1");

  // expand cells: single-phase once per (algorithm[,eps], budget)
  std::vector<CellSpec> cells;
  auto algo_variants = [&](Algorithm a) {
    std::vector<std::optional<double>> out;
    if (a == Algorithm::StochasticGreedy)
      for (double e : grid.epsilons) out.push_back(e);
    else
      out.push_back(std::nullopt);
    return out;
  };
  for (Algorithm a : grid.algorithms)
    for (const auto& eps : algo_variants(a))
      for (double b : grid.budgets) {
        cells.push_back({a, eps, b, -1, 0, true});
        for (double r : grid.split_ratios)
          for (int t : grid.timesteps) cells.push_back({a, eps, b, r, t, false});
      }

  // resume manifest: rows already computed for this exact grid signature
  nlohmann::json signature;
  signature["dataset"] = inst.name;
  signature["cells"] = cells.size();
  signature["seed"] = grid.master_seed;
  signature["samples"] = grid.estimator_samples;
  signature["reps"] = grid.replications;
  const std::string progress_path = out_prefix + ".progress.json";
  std::map<size_t, std::string> done;
  {
    std::ifstream in(progress_path);
    if (in) {
      nlohmann::json j;
      in >> j;
      if (j.value("signature", nlohmann::json()) == signature)
        for (auto& [k, v] : j["rows"].items()) done[std::stoul(k)] = v.get<std::string>();
    }
  }

  std::vector<std::string> lines(cells.size());

  auto run_cell = [&](size_t i) {
    const CellSpec& c = cells[i];
    if (auto it = done.find(i); it != done.end()) {
      lines[i] = it->second;
      return;
    }
    ResultRow row;
    row.dataset = inst.name;
    row.algorithm = algo_label(c.algo, c.epsilon);
    row.budget = c.budget;
    row.epsilon = c.epsilon;
    row.estimator_samples = grid.estimator_samples;
    row.replications = grid.replications;
    row.master_seed = grid.master_seed;
    auto t0 = std::chrono::steady_clock::now();
    try {
      TwoPhaseConfig cfg;
      cfg.total_budget = c.budget;
      cfg.algorithm = c.algo;
      cfg.epsilon = c.epsilon.value_or(0.1);
      cfg.estimator_samples = grid.estimator_samples;
      cfg.replications = grid.replications;
      cfg.phase2_mode = grid.phase2_mode;
      cfg.threads = 1;  // parallelism lives at the cell level
      cfg.master_seed = cell_seed(grid.master_seed, inst.name, row.algorithm, c.budget,
                                  c.single ? -1.0 : c.split_ratio, c.timestep,
                                  c.epsilon.value_or(0));
      if (c.single) {
        row.mode = "single";
        row.split_ratio = 0;
        row.timestep = 0;
        SinglePhaseResult sp =
            run_single_phase(inst.network, inst.econ, c.budget, c.algo, cfg);
        row.profit_mean = sp.profit.mean;
        row.profit_stderr = sp.profit.stderr_;
        row.seed_set_size = static_cast<double>(sp.seeds.nodes.size());
        row.diffusion_rounds = sp.mean_rounds;
      } else {
        row.mode = "two_phase";
        row.split_ratio = c.split_ratio;
        row.timestep = c.timestep;
        cfg.split_ratio = c.split_ratio;
        cfg.timestep = c.timestep;
        TwoPhaseResult tp = run_two_phase(inst.network, inst.econ, cfg);
        row.profit_mean = tp.realized_profit.mean;
        row.profit_stderr = tp.realized_profit.stderr_;
        row.seed_set_size = tp.mean_seed_count;
        row.diffusion_rounds = tp.mean_rounds_total;
      }
    } catch (const std::exception& ex) {
      row.error = ex.what();
      std::replace(row.error.begin(), row.error.end(), ',', ';');
    }
    row.wall_time_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    lines[i] = row.csv_line();
  };

#ifdef _OPENMP
  if (grid.workers != 1) {
#pragma omp parallel for schedule(dynamic) num_threads(grid.workers > 0 ? grid.workers : omp_get_max_threads())
    for (int64_t i = 0; i < static_cast<int64_t>(cells.size()); ++i) run_cell(static_cast<size_t>(i));
  } else
#endif
  {
    for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
  }

  // persist progress for resumability
  {
    nlohmann::json j;
    j["signature"] = signature;
    auto& rows = j["rows"] = nlohmann::json::object();
    for (size_t i = 0; i < cells.size(); ++i) rows[std::to_string(i)] = lines[i];
    std::ofstream out(progress_path);
    out << j.dump() << "\n";
  }

  GridOutputs outputs;
  outputs.master_csv = out_prefix + "_master.csv";
  {
    std::ofstream out(outputs.master_csv);
    if (!out) throw std::runtime_error("cannot write " + outputs.master_csv);
    out << ResultRow::csv_header() << "\n";
    for (const std::string& l : lines) out << l << "\n";
  }

  // per-question pivots
  auto table = read_csv(outputs.master_csv);
  const auto& header = table.front();
  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::logic_error("missing column " + name);
  };
  size_t c_algo = col("algorithm"), c_budget = col("budget"), c_split = col("split_ratio"),
         c_t = col("timestep"), c_mode = col("mode"), c_profit = col("profit_mean"),
         c_size = col("seed_set_size"), c_rounds = col("diffusion_rounds"),
         c_wall = col("wall_time_seconds"), c_eps = col("epsilon"), c_err = col("error");

  std::map<std::pair<std::string, std::string>, double> single_profit, single_size, single_rounds,
      single_wall;
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& r = table[i];
    if (r[c_mode] != "single" || !r[c_err].empty()) continue;
    auto key = std::make_pair(r[c_algo], r[c_budget]);
    single_profit[key] = std::stod(r[c_profit]);
    single_size[key] = std::stod(r[c_size]);
    single_rounds[key] = std::stod(r[c_rounds]);
    single_wall[key] = std::stod(r[c_wall]);
  }

  struct Pivot {
    std::string name;
    std::string header;
    std::vector<std::string> lines;
  };
  std::vector<Pivot> pivots = {
      {"rq1", "algorithm,budget,split_ratio,timestep,single_profit,two_phase_profit,improvement_pct", {}},
      {"rq2", "algorithm,budget,timestep,split_ratio,two_phase_profit", {}},
      {"rq3", "algorithm,budget,split_ratio,timestep,two_phase_profit", {}},
      {"rq4", "algorithm,budget,split_ratio,timestep,single_seed_size,two_phase_seed_size", {}},
      {"rq5", "algorithm,budget,split_ratio,timestep,single_rounds,two_phase_rounds", {}},
      {"rq6", "algorithm,budget,split_ratio,timestep,single_wall_seconds,two_phase_wall_seconds", {}},
      {"rq7", "algorithm,epsilon,budget,split_ratio,timestep,mode,profit_mean", {}},
  };
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& r = table[i];
    if (!r[c_err].empty()) continue;
    if (r[c_mode] == "two_phase") {
      auto key = std::make_pair(r[c_algo], r[c_budget]);
      double two = std::stod(r[c_profit]);
      std::string base = r[c_algo] + "," + r[c_budget];
      if (auto it = single_profit.find(key); it != single_profit.end()) {
        double one = it->second;
        double impr = one != 0 ? (two - one) / std::abs(one) * 100.0 : 0.0;
        pivots[0].lines.push_back(base + "," + r[c_split] + "," + r[c_t] + "," + fmt(one) + "," +
                                  fmt(two) + "," + fmt(impr));
        pivots[3].lines.push_back(base + "," + r[c_split] + "," + r[c_t] + "," +
                                  fmt(single_size[key]) + "," + r[c_size]);
        pivots[4].lines.push_back(base + "," + r[c_split] + "," + r[c_t] + "," +
                                  fmt(single_rounds[key]) + "," + r[c_rounds]);
        pivots[5].lines.push_back(base + "," + r[c_split] + "," + r[c_t] + "," +
                                  fmt(single_wall[key]) + "," + r[c_wall]);
      }
      pivots[1].lines.push_back(base + "," + r[c_t] + "," + r[c_split] + "," + r[c_profit]);
      pivots[2].lines.push_back(base + "," + r[c_split] + "," + r[c_t] + "," + r[c_profit]);
    }
    if (!r[c_eps].empty())
      pivots[6].lines.push_back(r[c_algo] + "," + r[c_eps] + "," + r[c_budget] + "," + r[c_split] +
                                "," + r[c_t] + "," + r[c_mode] + "," + r[c_profit]);
  }
  for (const Pivot& p : pivots) {
    std::string path = out_prefix + "_" + p.name + ".csv";
    std::ofstream out(path);
    out << p.header << "\n";
    for (const std::string& l : p.lines) out << l << "\n";
    outputs.rq_csvs.push_back(path);
  }
  return outputs;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw std::runtime_error("empty csv: " + path);
  return rows;
}

std::vector<ImprovementSummary> report_improvements(const std::string& master_csv_path) {
  auto table = read_csv(master_csv_path);
  const auto& header = table.front();
  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("missing column " + name);
  };
  size_t c_ds = col("dataset"), c_algo = col("algorithm"), c_budget = col("budget"),
         c_mode = col("mode"), c_profit = col("profit_mean"), c_err = col("error");

  std::map<std::tuple<std::string, std::string, std::string>, double> single;
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& r = table[i];
    if (r[c_mode] == "single" && r[c_err].empty())
      single[{r[c_ds], r[c_algo], r[c_budget]}] = std::stod(r[c_profit]);
  }
  std::map<std::pair<std::string, std::string>, std::vector<double>> improvements;
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& r = table[i];
    if (r[c_mode] != "two_phase" || !r[c_err].empty()) continue;
    auto it = single.find({r[c_ds], r[c_algo], r[c_budget]});
    if (it == single.end() || it->second == 0) continue;
    double impr = (std::stod(r[c_profit]) - it->second) / std::abs(it->second) * 100.0;
    improvements[{r[c_ds], r[c_algo]}].push_back(impr);
  }
  std::vector<ImprovementSummary> out;
  for (auto& [key, vals] : improvements) {
    ImprovementSummary s;
    s.dataset = key.first;
    s.algorithm = key.second;
    s.cells = static_cast<int>(vals.size());
    int pos = 0;
    for (double v : vals)
      if (v > 0) pos++;
    s.positive_fraction = vals.empty() ? 0 : static_cast<double>(pos) / vals.size();
    std::sort(vals.begin(), vals.end());
    s.median_improvement_pct = vals.empty() ? 0 : vals[vals.size() / 2];
    s.max_improvement_pct = vals.empty() ? 0 : vals.back();
    out.push_back(s);
  }
  return out;
}

std::string format_improvement_report(const std::vector<ImprovementSummary>& summaries) {
  std::ostringstream ss;
  ss << "dataset algorithm cells positive_fraction median_improvement_pct max_improvement_pct\n";
  for (const auto& s : summaries)
    ss << s.dataset << ' ' << s.algorithm << ' ' << s.cells << ' ' << fmt(s.positive_fraction)
       << ' ' << fmt(s.median_improvement_pct) << ' ' << fmt(s.max_improvement_pct) << "\n";
  ss << "# reference figures for this method family: improvement typically >18%, peaks near 40%\n";
  return ss.str();
}

std::string emit_plot_data(const std::string& rq_csv_path) {
  auto table = read_csv(rq_csv_path);
  std::string out_path = rq_csv_path;
  if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv")
    out_path = out_path.substr(0, out_path.size() - 4) + ".dat";
  else
    out_path += ".dat";
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  const auto& header = table.front();
  out << "#";
  for (const auto& h : header) out << " " << h;
  out << "\n";
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& r = table[i];
    if (r.size() != header.size()) throw std::runtime_error("ragged csv row in " + rq_csv_path);
    for (size_t cidx = 0; cidx < r.size(); ++cidx)
      out << (cidx ? " " : "") << (r[cidx].empty() ? "-" : r[cidx]);
    out << "\n";
  }
  return out_path;
}

}  // namespace pmax
