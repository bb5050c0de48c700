#include "pmax/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pmax/oracle.hpp"
#include "pmax/rng.hpp"

namespace pmax {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::SimpleGreedy: return "SG";
    case Algorithm::DoubleGreedy: return "DG";
    case Algorithm::StochasticGreedy: return "StG";
    case Algorithm::HighDegree: return "HD";
    case Algorithm::SingleDiscount: return "SD";
    case Algorithm::DegreeDiscount: return "DD";
    case Algorithm::HighClusteringCoefficient: return "HighCC";
    case Algorithm::Random: return "Random";
  }
  throw std::logic_error("unknown algorithm");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "SG") return Algorithm::SimpleGreedy;
  if (name == "DG") return Algorithm::DoubleGreedy;
  if (name == "StG") return Algorithm::StochasticGreedy;
  if (name == "HD") return Algorithm::HighDegree;
  if (name == "SD") return Algorithm::SingleDiscount;
  if (name == "DD") return Algorithm::DegreeDiscount;
  if (name == "HighCC") return Algorithm::HighClusteringCoefficient;
  if (name == "Random") return Algorithm::Random;
  throw std::invalid_argument("unknown algorithm: " + name);
}

// ---------------------------------------------------------------- estimators

namespace {

class MonteCarloEstimator final : public ProfitEstimator {
 public:
  MonteCarloEstimator(const NetworkView& view, const NodeEconomics& econ, int64_t samples,
                      uint64_t master_seed, int threads)
      : view_(view), g_(view.base()), econ_(econ), samples_(samples),
        root_(RngStream(master_seed).child("est")), threads_(threads) {
    if (!g_.has_probabilities()) throw std::runtime_error("edge probabilities not assigned");
    if (samples_ < 1) throw std::invalid_argument("samples must be >= 1");
  }

  std::vector<double> gains(std::span<const NodeId> current, std::span<const NodeId> candidates,
                            uint64_t tag) override {
    const size_t nc = candidates.size();
    std::vector<double> values((size_t)samples_ * nc);
    RngStream stream = root_.child(tag);

    auto run_replicate = [&](int64_t r, std::vector<uint32_t>& mark, uint32_t& epoch,
                             std::vector<NodeId>& stack) {
      RngStream rep = stream.child(static_cast<uint64_t>(r));
      uint32_t base = ++epoch;
      reach(current, rep, mark, base, stack, nullptr);
      for (size_t c = 0; c < nc; ++c) {
        NodeId u = candidates[c];
        double delta;
        if (mark[u] == base) {
          delta = -econ_.cost[u];  // covered already: pure cost
        } else {
          uint32_t mine = ++epoch;
          double extra = 0;
          grow(u, rep, mark, base, mine, stack, extra);
          delta = extra - econ_.cost[u];
        }
        values[c * (size_t)samples_ + (size_t)r] = delta;
        // reset candidate marks lazily: nodes marked `mine` stay; later
        // candidates use fresh epochs, base marks remain valid
      }
    };

#ifdef _OPENMP
    if (threads_ != 1) {
#pragma omp parallel num_threads(threads_ > 0 ? threads_ : omp_get_max_threads())
      {
        std::vector<uint32_t> mark(g_.node_count(), 0);
        uint32_t epoch = 0;
        std::vector<NodeId> stack;
#pragma omp for schedule(static)
        for (int64_t r = 0; r < samples_; ++r) run_replicate(r, mark, epoch, stack);
      }
    } else
#endif
    {
      std::vector<uint32_t> mark(g_.node_count(), 0);
      uint32_t epoch = 0;
      std::vector<NodeId> stack;
      for (int64_t r = 0; r < samples_; ++r) run_replicate(r, mark, epoch, stack);
    }

    std::vector<double> out(nc);
    for (size_t c = 0; c < nc; ++c)
      out[c] = pairwise_sum(std::span(values).subspan(c * (size_t)samples_, (size_t)samples_)) /
               static_cast<double>(samples_);
    return out;
  }

  double profit(std::span<const NodeId> seeds, uint64_t tag) override {
    std::vector<double> vals((size_t)samples_);
    RngStream stream = root_.child(tag);
    double cost = 0;
    for (NodeId u : seeds) cost += econ_.cost[u];

    auto run_replicate = [&](int64_t r, std::vector<uint32_t>& mark, uint32_t& epoch,
                             std::vector<NodeId>& stack) {
      RngStream rep = stream.child(static_cast<uint64_t>(r));
      double benefit = 0;
      reach(seeds, rep, mark, ++epoch, stack, &benefit);
      vals[(size_t)r] = benefit - cost;
    };

#ifdef _OPENMP
    if (threads_ != 1) {
#pragma omp parallel num_threads(threads_ > 0 ? threads_ : omp_get_max_threads())
      {
        std::vector<uint32_t> mark(g_.node_count(), 0);
        uint32_t epoch = 0;
        std::vector<NodeId> stack;
#pragma omp for schedule(static)
        for (int64_t r = 0; r < samples_; ++r) run_replicate(r, mark, epoch, stack);
      }
    } else
#endif
    {
      std::vector<uint32_t> mark(g_.node_count(), 0);
      uint32_t epoch = 0;
      std::vector<NodeId> stack;
      for (int64_t r = 0; r < samples_; ++r) run_replicate(r, mark, epoch, stack);
    }
    return pairwise_sum(vals) / static_cast<double>(samples_);
  }

 private:
  void reach(std::span<const NodeId> seeds, const RngStream& rep, std::vector<uint32_t>& mark,
             uint32_t epoch, std::vector<NodeId>& stack, double* benefit) const {
    stack.clear();
    for (NodeId s : seeds) {
      if (!view_.present(s) || mark[s] == epoch) continue;
      mark[s] = epoch;
      stack.push_back(s);
      if (benefit) *benefit += econ_.benefit[s];
    }
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (EdgeId e : g_.out_edges(u)) {
        NodeId v = g_.edge(e).dst;
        if (!view_.present(v) || mark[v] == epoch) continue;
        if (edge_live(rep, g_, e)) {
          mark[v] = epoch;
          stack.push_back(v);
          if (benefit) *benefit += econ_.benefit[v];
        }
      }
    }
  }

  // BFS from u over nodes not marked base/mine; accumulates new benefit.
  void grow(NodeId u, const RngStream& rep, std::vector<uint32_t>& mark, uint32_t base,
            uint32_t mine, std::vector<NodeId>& stack, double& extra) const {
    if (!view_.present(u)) return;
    stack.clear();
    mark[u] = mine;
    stack.push_back(u);
    extra += econ_.benefit[u];
    while (!stack.empty()) {
      NodeId w = stack.back();
      stack.pop_back();
      for (EdgeId e : g_.out_edges(w)) {
        NodeId v = g_.edge(e).dst;
        if (!view_.present(v) || mark[v] == mine || mark[v] == base) continue;
        if (edge_live(rep, g_, e)) {
          mark[v] = mine;
          stack.push_back(v);
          extra += econ_.benefit[v];
        }
      }
    }
  }

  const NetworkView& view_;
  const SocialNetwork& g_;
  const NodeEconomics& econ_;
  int64_t samples_;
  RngStream root_;
  int threads_;
};

class ExactEstimator final : public ProfitEstimator {
 public:
  ExactEstimator(const NetworkView& view, const NodeEconomics& econ) : econ_(econ) {
    // reduce to the surviving edges; node ids are preserved
    std::vector<Edge> kept;
    for (const Edge& e : view.base().edges())
      if (view.present(e.src) && view.present(e.dst)) kept.push_back(e);
    sub_ = SocialNetwork(view.base().node_count(), std::move(kept));
    present_.assign(view.base().node_count(), 0);
    for (NodeId u = 0; u < view.base().node_count(); ++u) present_[u] = view.present(u);
  }

  std::vector<double> gains(std::span<const NodeId> current, std::span<const NodeId> candidates,
                            uint64_t) override {
    double base = profit_of(current);
    std::vector<double> out;
    out.reserve(candidates.size());
    std::vector<NodeId> ext(current.begin(), current.end());
    for (NodeId u : candidates) {
      ext.push_back(u);
      out.push_back(profit_of(ext) - base);
      ext.pop_back();
    }
    return out;
  }

  double profit(std::span<const NodeId> seeds, uint64_t) override { return profit_of(seeds); }

 private:
  double profit_of(std::span<const NodeId> seeds) {
    std::vector<NodeId> kept;
    for (NodeId u : seeds)
      if (present_[u]) kept.push_back(u);
    double p = kept.empty() ? 0.0 : exact_profit(sub_, econ_, kept, 1);
    // seeds outside the view carry no cost here; callers never pass them
    return p;
  }

  SocialNetwork sub_;
  const NodeEconomics& econ_;
  std::vector<uint8_t> present_;
};

}  // namespace

std::unique_ptr<ProfitEstimator> make_mc_estimator(const NetworkView& view,
                                                   const NodeEconomics& econ, int64_t samples,
                                                   uint64_t master_seed, int threads) {
  return std::make_unique<MonteCarloEstimator>(view, econ, samples, master_seed, threads);
}

std::unique_ptr<ProfitEstimator> make_exact_estimator(const NetworkView& view,
                                                      const NodeEconomics& econ) {
  return std::make_unique<ExactEstimator>(view, econ);
}

// ----------------------------------------------------------------- selectors

namespace {

std::vector<NodeId> view_candidates(const SelectionContext& ctx) { return ctx.view->nodes(); }

SeedSelection finish(std::vector<NodeId> nodes, const SelectionContext& ctx) {
  SeedSelection sel;
  sel.nodes = std::move(nodes);
  sel.budget = ctx.budget;
  for (NodeId u : sel.nodes) sel.total_cost += ctx.econ->cost[u];
  return sel;
}

// Shared greedy loop; `sampler` picks the candidate subset evaluated at each
// iteration (identity for the plain greedy).
SeedSelection ratio_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                           SelectionTrace* trace, bool stochastic) {
  std::vector<NodeId> pool = view_candidates(ctx);
  std::vector<NodeId> chosen;
  std::vector<uint8_t> out(ctx.view->base().node_count(), 0);
  double left = ctx.budget;
  SelectionTrace local;
  SelectionTrace& tr = trace ? *trace : local;

  const int64_t n0 = static_cast<int64_t>(pool.size());
  double mean_cost = 0;
  for (NodeId u : pool) mean_cost += ctx.econ->cost[u];
  mean_cost = pool.empty() ? 1.0 : mean_cost / static_cast<double>(pool.size());
  RngStream stg = RngStream(ctx.master_seed).child("stg");

  for (uint64_t iter = 0;; ++iter) {
    std::vector<NodeId> cands;
    cands.reserve(pool.size());
    for (NodeId u : pool)
      if (!out[u]) cands.push_back(u);
    if (cands.empty()) break;

    if (stochastic) {
      int64_t want = stochastic_sample_size(n0, ctx.budget, mean_cost, ctx.epsilon);
      if (want < static_cast<int64_t>(cands.size())) {
        // partial Fisher-Yates on a dedicated substream
        RngStream it = stg.child(iter);
        for (int64_t i = 0; i < want; ++i) {
          uint64_t j = i + it.below(static_cast<uint64_t>(i), cands.size() - i);
          std::swap(cands[i], cands[j]);
        }
        cands.resize(static_cast<size_t>(want));
        std::sort(cands.begin(), cands.end());
      }
    }

    std::vector<double> gains = est.gains(chosen, cands, iter);
    tr.estimator_batches++;

    std::vector<size_t> order(cands.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      double ra = gains[a] / ctx.econ->cost[cands[a]];
      double rb = gains[b] / ctx.econ->cost[cands[b]];
      if (ra != rb) return ra > rb;
      return cands[a] < cands[b];
    });

    bool added = false, stopped = false;
    for (size_t idx : order) {
      NodeId u = cands[idx];
      if (gains[idx] <= 0) {
        stopped = true;  // best remaining gain non-positive
        break;
      }
      if (ctx.econ->cost[u] <= left) {
        chosen.push_back(u);
        left -= ctx.econ->cost[u];
        tr.additions++;
        added = true;
        break;
      }
      out[u] = 1;  // skipped permanently
      tr.skipped_unaffordable++;
    }
    if (stopped || !added) break;
    // drop the chosen node from the pool
    pool.erase(std::remove(pool.begin(), pool.end(), chosen.back()), pool.end());
  }
  return finish(std::move(chosen), ctx);
}

}  // namespace

int64_t stochastic_sample_size(int64_t candidate_count, double budget, double mean_cost,
                               double epsilon) {
  if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("epsilon must be in (0,1)");
  double k = std::max(1.0, std::floor(budget / std::max(mean_cost, 1e-300)));
  double raw = std::ceil(static_cast<double>(candidate_count) / k * std::log(1.0 / epsilon));
  return std::min<int64_t>(candidate_count, std::max<int64_t>(1, static_cast<int64_t>(raw)));
}

SeedSelection simple_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                            SelectionTrace* trace) {
  return ratio_greedy(ctx, est, trace, false);
}

SeedSelection stochastic_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                                SelectionTrace* trace) {
  return ratio_greedy(ctx, est, trace, true);
}

SeedSelection double_greedy(const SelectionContext& ctx, ProfitEstimator& est,
                            SelectionTrace* trace) {
  std::vector<NodeId> cands = view_candidates(ctx);  // fixed ascending order
  std::vector<NodeId> S;
  std::set<NodeId> T(cands.begin(), cands.end());
  double left = ctx.budget;
  SelectionTrace local;
  SelectionTrace& tr = trace ? *trace : local;

  for (NodeId u : cands) {
    uint64_t tag = hash_combine(hash_str("dg"), u);
    double cu = ctx.econ->cost[u];
    double rplus = est.gains(S, std::span(&u, 1), tag)[0] / cu;
    std::vector<NodeId> t_all(T.begin(), T.end());
    std::vector<NodeId> t_minus;
    t_minus.reserve(t_all.size());
    for (NodeId v : t_all)
      if (v != u) t_minus.push_back(v);
    double rminus = -(est.profit(t_minus, tag) - est.profit(t_all, tag)) / cu;
    tr.pair_evaluations++;
    if (rplus >= rminus && cu <= left) {
      S.push_back(u);
      left -= cu;
      tr.additions++;
    } else {
      T.erase(u);
      if (rplus >= rminus) tr.skipped_unaffordable++;
    }
  }
  tr.final_t_size = T.size();
  tr.s_subset_of_t = std::all_of(S.begin(), S.end(), [&](NodeId u) { return T.count(u) > 0; });
  return finish(std::move(S), ctx);
}

namespace {

SeedSelection affordable_scan(const SelectionContext& ctx, std::vector<NodeId> ordered) {
  std::vector<NodeId> chosen;
  double left = ctx.budget;
  for (NodeId u : ordered) {
    if (ctx.econ->cost[u] <= left) {
      chosen.push_back(u);
      left -= ctx.econ->cost[u];
    }
    // unaffordable nodes are skipped and the scan continues
  }
  return finish(std::move(chosen), ctx);
}

}  // namespace

SeedSelection high_degree(const SelectionContext& ctx) {
  std::vector<NodeId> order = view_candidates(ctx);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    uint32_t da = ctx.view->out_degree(a), db = ctx.view->out_degree(b);
    if (da != db) return da > db;
    return a < b;
  });
  return affordable_scan(ctx, std::move(order));
}

SeedSelection single_discount(const SelectionContext& ctx) {
  const SocialNetwork& g = ctx.view->base();
  std::vector<NodeId> pool = view_candidates(ctx);
  std::vector<int64_t> eff(g.node_count(), 0);
  for (NodeId u : pool) eff[u] = ctx.view->out_degree(u);
  std::vector<uint8_t> removed(g.node_count(), 0);
  std::vector<NodeId> chosen;
  double left = ctx.budget;
  size_t remaining = pool.size();
  while (remaining > 0) {
    NodeId best = 0;
    int64_t best_eff = -1;
    for (NodeId u : pool) {
      if (removed[u]) continue;
      if (eff[u] > best_eff) {
        best_eff = eff[u];
        best = u;
      }
    }
    if (best_eff < 0) break;
    removed[best] = 1;
    remaining--;
    if (ctx.econ->cost[best] <= left) {
      chosen.push_back(best);
      left -= ctx.econ->cost[best];
      for (EdgeId e : g.out_edges(best)) {
        NodeId v = g.edge(e).dst;
        if (ctx.view->present(v) && !removed[v]) eff[v] -= 1;
      }
    }
  }
  return finish(std::move(chosen), ctx);
}

SeedSelection degree_discount(const SelectionContext& ctx) {
  const SocialNetwork& g = ctx.view->base();
  double p = ctx.discount_p.value_or(0.0);
  if (!ctx.discount_p) {
    // mean probability over the view's edges
    double s = 0;
    int64_t m = 0;
    for (const Edge& e : g.edges())
      if (ctx.view->present(e.src) && ctx.view->present(e.dst)) {
        s += e.prob;
        m++;
      }
    p = m ? s / static_cast<double>(m) : 0.0;
  }
  std::vector<NodeId> pool = view_candidates(ctx);
  std::vector<double> dd(g.node_count(), 0);
  std::vector<int64_t> t(g.node_count(), 0);
  for (NodeId u : pool) dd[u] = ctx.view->out_degree(u);
  std::vector<uint8_t> removed(g.node_count(), 0);
  std::vector<NodeId> chosen;
  double left = ctx.budget;
  size_t remaining = pool.size();
  while (remaining > 0) {
    NodeId best = 0;
    double best_dd = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (NodeId u : pool) {
      if (removed[u]) continue;
      if (!found || dd[u] > best_dd) {
        best_dd = dd[u];
        best = u;
        found = true;
      }
    }
    if (!found) break;
    removed[best] = 1;
    remaining--;
    if (ctx.econ->cost[best] <= left) {
      chosen.push_back(best);
      left -= ctx.econ->cost[best];
      for (EdgeId e : g.out_edges(best)) {
        NodeId v = g.edge(e).dst;
        if (!ctx.view->present(v) || removed[v]) continue;
        t[v] += 1;
        double d = ctx.view->out_degree(v);
        dd[v] = d - 2.0 * t[v] - (d - t[v]) * t[v] * p;
      }
    }
  }
  return finish(std::move(chosen), ctx);
}

SeedSelection high_clustering_coefficient(const SelectionContext& ctx) {
  const SocialNetwork& g = ctx.view->base();
  std::vector<NodeId> pool = view_candidates(ctx);
  // undirected simple neighborhoods within the view
  std::vector<std::vector<NodeId>> nb(g.node_count());
  for (const Edge& e : g.edges()) {
    if (!ctx.view->present(e.src) || !ctx.view->present(e.dst)) continue;
    nb[e.src].push_back(e.dst);
    nb[e.dst].push_back(e.src);
  }
  for (auto& v : nb) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  auto connected = [&](NodeId a, NodeId b) {
    return std::binary_search(nb[a].begin(), nb[a].end(), b);
  };
  std::vector<double> cc(g.node_count(), 0);
  std::vector<uint32_t> und_deg(g.node_count(), 0);
  for (NodeId u : pool) {
    size_t k = nb[u].size();
    und_deg[u] = static_cast<uint32_t>(k);
    if (k < 2) continue;
    uint64_t links = 0;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i + 1; j < k; ++j)
        if (connected(nb[u][i], nb[u][j])) links++;
    cc[u] = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
  }
  std::stable_sort(pool.begin(), pool.end(), [&](NodeId a, NodeId b) {
    if (cc[a] != cc[b]) return cc[a] > cc[b];
    if (und_deg[a] != und_deg[b]) return und_deg[a] > und_deg[b];
    return a < b;
  });
  return affordable_scan(ctx, std::move(pool));
}

SeedSelection random_selection(const SelectionContext& ctx) {
  std::vector<NodeId> pool = view_candidates(ctx);
  RngStream rng = RngStream(ctx.master_seed).child("random");
  std::vector<NodeId> chosen;
  double left = ctx.budget;
  uint64_t draw = 0;
  while (!pool.empty()) {
    uint64_t i = rng.below(draw++, pool.size());
    NodeId u = pool[i];
    pool.erase(pool.begin() + static_cast<ptrdiff_t>(i));
    if (ctx.econ->cost[u] <= left) {
      chosen.push_back(u);
      left -= ctx.econ->cost[u];
    }
    // an unaffordable draw can never become affordable again; drop it
  }
  return finish(std::move(chosen), ctx);
}

SeedSelection select_seeds(const SelectionContext& ctx, Algorithm algo, ProfitEstimator* est,
                           SelectionTrace* trace) {
  std::unique_ptr<ProfitEstimator> owned;
  auto need = [&]() -> ProfitEstimator& {
    if (est) return *est;
    owned = make_mc_estimator(*ctx.view, *ctx.econ, ctx.estimator_samples, ctx.master_seed,
                              ctx.threads);
    return *owned;
  };
  switch (algo) {
    case Algorithm::SimpleGreedy: return simple_greedy(ctx, need(), trace);
    case Algorithm::DoubleGreedy: return double_greedy(ctx, need(), trace);
    case Algorithm::StochasticGreedy: return stochastic_greedy(ctx, need(), trace);
    case Algorithm::HighDegree: return high_degree(ctx);
    case Algorithm::SingleDiscount: return single_discount(ctx);
    case Algorithm::DegreeDiscount: return degree_discount(ctx);
    case Algorithm::HighClusteringCoefficient: return high_clustering_coefficient(ctx);
    case Algorithm::Random: return random_selection(ctx);
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace pmax
