#include "pmax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pmax/diffusion.hpp"
#include "pmax/rng.hpp"

namespace pmax {

namespace {

void require_enumerable(const SocialNetwork& g) {
  if (!g.has_probabilities()) throw std::runtime_error("edge probabilities not assigned");
  if (g.edge_count() > kEnumerationEdgeCap)
    throw std::runtime_error("instance too large for exact enumeration (m > " +
                             std::to_string(kEnumerationEdgeCap) + ")");
}

struct Cascade {
  std::vector<uint8_t> active;
  std::vector<NodeId> order;  // activation order, seeds first
};

// d rounds of the deterministic cascade on realization `mask`; d < 0 means to
// quiescence. Also reports the edges resolved along the way (all out-edges of
// newly active nodes whose target was inactive at the start of the round).
struct PhaseOne {
  std::vector<uint8_t> active;
  std::vector<NodeId> already;  // sorted
  std::vector<NodeId> recent;   // sorted, activated at round d exactly
  std::vector<EdgeId> tried;    // sorted
};

PhaseOne run_phase_one(const SocialNetwork& g, LiveGraphMask mask, std::span<const NodeId> seeds,
                       int d) {
  PhaseOne ph;
  ph.active.assign(g.node_count(), 0);
  std::vector<NodeId> frontier;
  for (NodeId s : seeds)
    if (!ph.active[s]) {
      ph.active[s] = 1;
      frontier.push_back(s);
      ph.already.push_back(s);
    }
  std::sort(frontier.begin(), frontier.end());
  if (d == 0) ph.recent = frontier;
  int limit = d < 0 ? static_cast<int>(g.node_count()) + 1 : d;
  for (int t = 1; t <= limit && !frontier.empty(); ++t) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (ph.active[v]) continue;
        ph.tried.push_back(e);
        if (mask >> e & 1) next.push_back(v);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (NodeId v : next) ph.active[v] = 1;
    ph.already.insert(ph.already.end(), next.begin(), next.end());
    if (t == d) ph.recent = next;
    frontier.swap(next);
  }
  std::sort(ph.already.begin(), ph.already.end());
  std::sort(ph.tried.begin(), ph.tried.end());
  return ph;
}

// Completes the cascade from (active, frontier) on `mask`. Returns the number
// of nodes activated beyond `active` and accumulates their benefit.
int complete_cascade(const SocialNetwork& g, LiveGraphMask mask, std::vector<uint8_t>& active,
                     std::vector<NodeId> frontier, const NodeEconomics& econ, double& benefit) {
  int newly = 0;
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (active[v]) continue;
        if (mask >> e & 1) {
          active[v] = 1;
          next.push_back(v);
          newly++;
          benefit += econ.benefit[v];
        }
      }
    }
    frontier.swap(next);
  }
  return newly;
}

struct RowResult {
  std::vector<NodeId> s2;
  double profit;
  std::vector<NodeId> already, recent;
};

// Phase-2 seed choice for one realization: maximize newly activated count
// among affordable subsets of the non-active nodes; never leave budget unused
// when some candidate is affordable; lexicographic tie-break (subsets visited
// in lexicographic order of their sorted id sequences, strict improvement
// required to switch).
RowResult solve_row(const SocialNetwork& g, const NodeEconomics& econ, LiveGraphMask mask,
                    std::span<const NodeId> s1, int d, double b2) {
  PhaseOne ph = run_phase_one(g, mask, s1, d);
  std::vector<NodeId> cands;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (!ph.active[u]) cands.push_back(u);
  if (cands.size() > kPhase2CandidateCap)
    throw std::runtime_error("phase-2 brute force too large (candidates > " +
                             std::to_string(kPhase2CandidateCap) + ")");

  double base_benefit = 0;
  for (NodeId u : ph.already) base_benefit += econ.benefit[u];
  double s1_cost = 0;
  for (NodeId u : s1) s1_cost += econ.cost[u];

  bool any_affordable = false;
  for (NodeId u : cands)
    if (econ.cost[u] <= b2 + 1e-12) any_affordable = true;

  int best_newly = -1;
  double best_profit = 0;
  std::vector<NodeId> best_s2;

  std::vector<NodeId> chosen;
  auto evaluate = [&]() {
    if (chosen.empty() && any_affordable) return;  // spend when possible
    std::vector<uint8_t> active = ph.active;
    double benefit = base_benefit;
    double cost2 = 0;
    std::vector<NodeId> frontier = ph.recent;
    int newly = 0;
    for (NodeId u : chosen) {
      active[u] = 1;
      frontier.push_back(u);
      benefit += econ.benefit[u];
      cost2 += econ.cost[u];
      newly++;
    }
    newly += complete_cascade(g, mask, active, std::move(frontier), econ, benefit);
    if (newly > best_newly) {
      best_newly = newly;
      best_profit = benefit - s1_cost - cost2;
      best_s2 = chosen;
    }
  };

  // DFS over subsets in lexicographic order of sorted id sequences
  auto rec = [&](auto&& self, size_t start, double cost_left) -> void {
    evaluate();
    for (size_t i = start; i < cands.size(); ++i) {
      NodeId u = cands[i];
      if (econ.cost[u] > cost_left + 1e-12) continue;
      chosen.push_back(u);
      self(self, i + 1, cost_left - econ.cost[u]);
      chosen.pop_back();
    }
  };
  rec(rec, 0, b2);

  RowResult r;
  r.s2 = std::move(best_s2);
  r.profit = best_profit;
  r.already = std::move(ph.already);
  r.recent = std::move(ph.recent);
  return r;
}

}  // namespace

double live_graph_probability(const SocialNetwork& g, LiveGraphMask mask) {
  require_enumerable(g);
  double p = 1.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    p *= (mask >> e & 1) ? g.edge(e).prob : 1.0 - g.edge(e).prob;
  return p;
}

std::vector<NodeId> exact_reachable(const SocialNetwork& g, LiveGraphMask mask,
                                    std::span<const NodeId> seeds) {
  std::vector<uint8_t> active(g.node_count(), 0);
  std::vector<NodeId> stack;
  for (NodeId s : seeds)
    if (!active[s]) {
      active[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (EdgeId e : g.out_edges(u)) {
      NodeId v = g.edge(e).dst;
      if (!active[v] && (mask >> e & 1)) {
        active[v] = 1;
        stack.push_back(v);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (active[u]) out.push_back(u);
  return out;
}

double exact_profit(const SocialNetwork& g, const NodeEconomics& econ,
                    std::span<const NodeId> seeds, int threads) {
  require_enumerable(g);
  if (seeds.empty()) return 0.0;
  uint64_t masks = 1ULL << g.edge_count();
  std::vector<double> contrib(masks);

  auto body = [&](uint64_t mask) {
    double benefit = 0;
    for (NodeId u : exact_reachable(g, static_cast<LiveGraphMask>(mask), seeds))
      benefit += econ.benefit[u];
    contrib[mask] = live_graph_probability(g, static_cast<LiveGraphMask>(mask)) * benefit;
  };

#ifdef _OPENMP
  if (threads != 1) {
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (int64_t mask = 0; mask < static_cast<int64_t>(masks); ++mask)
      body(static_cast<uint64_t>(mask));
  } else
#endif
  {
    for (uint64_t mask = 0; mask < masks; ++mask) body(mask);
  }

  double cost = 0;
  for (NodeId u : seeds) cost += econ.cost[u];
  return pairwise_sum(contrib) - cost;
}

double exact_two_phase_objective(const SocialNetwork& g, const NodeEconomics& econ,
                                 std::span<const NodeId> s1, int d, double b2, int threads) {
  require_enumerable(g);
  if (d < 0) throw std::invalid_argument("timestep must be >= 0");
  if (s1.empty()) return 0.0;  // no first phase, no objective
  uint64_t masks = 1ULL << g.edge_count();
  std::vector<double> contrib(masks);

  auto body = [&](uint64_t mask) {
    RowResult row = solve_row(g, econ, static_cast<LiveGraphMask>(mask), s1, d, b2);
    contrib[mask] = live_graph_probability(g, static_cast<LiveGraphMask>(mask)) * row.profit;
  };

#ifdef _OPENMP
  if (threads != 1) {
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (int64_t mask = 0; mask < static_cast<int64_t>(masks); ++mask)
      body(static_cast<uint64_t>(mask));
  } else
#endif
  {
    for (uint64_t mask = 0; mask < masks; ++mask) body(mask);
  }
  return pairwise_sum(contrib);
}

TwoPhaseTable exact_two_phase_table(const SocialNetwork& g, const NodeEconomics& econ,
                                    std::span<const NodeId> s1, int d, double b2) {
  require_enumerable(g);
  TwoPhaseTable table;
  uint64_t masks = 1ULL << g.edge_count();
  std::vector<double> contrib(masks, 0.0);
  for (uint64_t mask = 0; mask < masks; ++mask) {
    TwoPhaseRow out;
    out.mask = static_cast<LiveGraphMask>(mask);
    out.prob = live_graph_probability(g, out.mask);
    if (s1.empty()) {
      out.profit = 0;
    } else {
      RowResult row = solve_row(g, econ, out.mask, s1, d, b2);
      out.already_active = row.already;
      out.recently_active = row.recent;
      out.phase2_seeds = row.s2;
      out.profit = row.profit;
    }
    out.contribution = out.prob * out.profit;
    contrib[mask] = out.contribution;
    table.rows.push_back(std::move(out));
  }
  table.total = pairwise_sum(contrib);
  return table;
}

std::vector<ObservationGroup> group_by_observation(const SocialNetwork& g,
                                                   const NodeEconomics& econ,
                                                   std::span<const NodeId> s1, int d, double b2) {
  require_enumerable(g);
  std::map<std::string, ObservationGroup> groups;
  uint64_t masks = 1ULL << g.edge_count();
  for (uint64_t mask = 0; mask < masks; ++mask) {
    PhaseOne ph = run_phase_one(g, static_cast<LiveGraphMask>(mask), s1, d);
    std::string key;
    for (NodeId u : ph.already) key += std::to_string(u) + ",";
    key += "|";
    for (NodeId u : ph.recent) key += std::to_string(u) + ",";
    key += "|";
    for (EdgeId e : ph.tried)
      key += std::to_string(e) + ((mask >> e & 1) ? "+" : "-");
    auto& grp = groups[key];
    grp.key = key;
    grp.prob += live_graph_probability(g, static_cast<LiveGraphMask>(mask));
    grp.members.push_back(static_cast<LiveGraphMask>(mask));
  }
  std::vector<ObservationGroup> out;
  for (auto& [k, grp] : groups) {
    if (!s1.empty() && grp.prob > 0) {
      double v = 0;
      for (LiveGraphMask mask : grp.members) {
        RowResult row = solve_row(g, econ, mask, s1, d, b2);
        v += live_graph_probability(g, mask) / grp.prob * row.profit;
      }
      grp.conditional_value = v;
    }
    out.push_back(std::move(grp));
  }
  return out;
}

SignCheckReport verify_sign_lemma(const InstanceSpec& positive, const InstanceSpec& negative) {
  SignCheckReport rep;
  std::vector<NodeId> s1{0};
  rep.positive_value = exact_two_phase_objective(positive.network, positive.econ, s1,
                                                 positive.timestep, positive.b2);
  rep.negative_value = exact_two_phase_objective(negative.network, negative.econ, s1,
                                                 negative.timestep, negative.b2);
  rep.ok = rep.positive_value > 0 && rep.negative_value < 0;
  return rep;
}

namespace {

std::vector<std::vector<NodeId>> all_subsets(NodeId n, size_t max_size) {
  std::vector<std::vector<NodeId>> out;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<NodeId> s;
    for (NodeId u = 0; u < n; ++u)
      if (mask >> u & 1) s.push_back(u);
    if (s.size() <= max_size) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::optional<MonotonicityWitness> find_nonmonotone_witness(const InstanceSpec& inst) {
  NodeId n = inst.network.node_count();
  auto f = [&](std::span<const NodeId> s) {
    return exact_two_phase_objective(inst.network, inst.econ, s, inst.timestep, inst.b2);
  };
  for (const auto& base : all_subsets(n, n)) {
    if (base.empty()) continue;
    double fb = f(base);
    std::optional<NodeId> up, down;
    double fu = 0, fd = 0;
    for (NodeId u = 0; u < n; ++u) {
      if (std::find(base.begin(), base.end(), u) != base.end()) continue;
      std::vector<NodeId> ext = base;
      ext.push_back(u);
      std::sort(ext.begin(), ext.end());
      double fe = f(ext);
      if (!up && fe > fb + 1e-12) {
        up = u;
        fu = fe;
      }
      if (!down && fe < fb - 1e-12) {
        down = u;
        fd = fe;
      }
    }
    if (up && down)
      return MonotonicityWitness{base, *up, *down, fb, fu, fd};
  }
  return std::nullopt;
}

std::optional<ModularityWitness> find_nonsubmodular_witness(const InstanceSpec& inst) {
  NodeId n = inst.network.node_count();
  auto f = [&](std::span<const NodeId> s) {
    if (s.empty()) return 0.0;
    return exact_two_phase_objective(inst.network, inst.econ, s, inst.timestep, inst.b2);
  };
  auto subsets = all_subsets(n, n);
  std::optional<std::tuple<std::vector<NodeId>, std::vector<NodeId>, NodeId>> sub, super;
  for (const auto& s : subsets) {
    for (const auto& t : subsets) {
      if (s.size() >= t.size()) continue;
      if (!std::includes(t.begin(), t.end(), s.begin(), s.end())) continue;
      for (NodeId i = 0; i < n; ++i) {
        if (std::find(t.begin(), t.end(), i) != t.end()) continue;
        std::vector<NodeId> si = s, ti = t;
        si.push_back(i);
        ti.push_back(i);
        std::sort(si.begin(), si.end());
        std::sort(ti.begin(), ti.end());
        double ds = f(si) - f(s);
        double dt = f(ti) - f(t);
        if (!sub && ds < dt - 1e-12) sub = {s, t, i};      // submodularity violated
        if (!super && ds > dt + 1e-12) super = {s, t, i};  // supermodularity violated
        if (sub && super) {
          ModularityWitness w;
          std::tie(w.sub_s, w.sub_t, w.sub_i) = *sub;
          std::tie(w.super_s, w.super_t, w.super_i) = *super;
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

SubadditivityReport check_subadditivity(const InstanceSpec& inst, int trials, uint64_t seed) {
  SubadditivityReport rep;
  NodeId n = inst.network.node_count();
  RngStream rng = RngStream(seed).child("subadd");
  auto f = [&](std::span<const NodeId> s) {
    if (s.empty()) return 0.0;
    return exact_two_phase_objective(inst.network, inst.econ, s, inst.timestep, inst.b2);
  };
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    uint32_t mmask = static_cast<uint32_t>(rng.bits(2 * t) & ((1u << n) - 1));
    uint32_t nmask = static_cast<uint32_t>(rng.bits(2 * t + 1) & ((1u << n) - 1));
    std::vector<NodeId> M, N, U;
    for (NodeId u = 0; u < n; ++u) {
      if (mmask >> u & 1) M.push_back(u);
      if (nmask >> u & 1) N.push_back(u);
      if ((mmask | nmask) >> u & 1) U.push_back(u);
    }
    double fm = f(M), fn = f(N);
    if (fm < 0 || fn < 0) {
      rep.skipped++;  // lemma's domain: nonnegative sides
      continue;
    }
    double fu = f(U);
    double slack = fm + fn - fu;
    rep.checked++;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    double tol = 1e-9 * std::max({1.0, std::abs(fm), std::abs(fn), std::abs(fu)});
    if (fu > fm + fn + tol) rep.violations++;
  }
  return rep;
}

}  // namespace pmax
