#include "pmax/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmax {

namespace {

void require_probs(const SocialNetwork& g) {
  if (!g.has_probabilities()) throw std::runtime_error("edge probabilities not assigned");
}

}  // namespace

DiffusionOutcome simulate_ic(const SocialNetwork& g, std::span<const NodeId> seeds,
                             const RngStream& replicate) {
  require_probs(g);
  DiffusionOutcome out;
  std::vector<uint8_t> active(g.node_count(), 0);
  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw std::invalid_argument("seed out of range");
    if (!active[s]) {
      active[s] = 1;
      frontier.push_back(s);
      out.activated.push_back(s);
    }
  }
  int round_cap = static_cast<int>(g.node_count()) + 1;
  while (!frontier.empty()) {
    if (out.rounds > round_cap) throw std::logic_error("cascade exceeded round cap");
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (active[v]) continue;
        if (edge_live(replicate, g, e)) {
          active[v] = 1;
          next.push_back(v);
        }
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    out.activated.insert(out.activated.end(), next.begin(), next.end());
    out.newly_active_per_round.push_back(next);
    out.rounds++;
    frontier.swap(next);
  }
  std::sort(out.activated.begin(), out.activated.end());
  return out;
}

PartialObservation simulate_to_timestep(const SocialNetwork& g, std::span<const NodeId> seeds,
                                        int d, const RngStream& replicate) {
  require_probs(g);
  if (d < 0) throw std::invalid_argument("timestep must be >= 0");
  PartialObservation obs;
  obs.timestep = d;
  std::vector<uint8_t> active(g.node_count(), 0);
  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    if (!active[s]) {
      active[s] = 1;
      frontier.push_back(s);
      obs.already_active.push_back(s);
    }
  }
  std::sort(frontier.begin(), frontier.end());
  if (d == 0) {
    // seeding counts as round 0; nothing attempted yet
    obs.recently_active = frontier;
    std::sort(obs.already_active.begin(), obs.already_active.end());
    return obs;
  }
  std::vector<NodeId> recent;
  for (int t = 1; t <= d && !frontier.empty(); ++t) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (active[v]) continue;
        if (edge_live(replicate, g, e)) {
          obs.live_edges.push_back(e);
          active[v] = 1;
          next.push_back(v);
        } else {
          obs.failed_edges.push_back(e);
        }
      }
    }
    std::sort(next.begin(), next.end());
    obs.already_active.insert(obs.already_active.end(), next.begin(), next.end());
    if (!next.empty()) obs.rounds_run = t;
    if (t == d) recent = next;  // stays empty when quiescent before d
    frontier.swap(next);
  }
  obs.recently_active = recent;
  std::sort(obs.already_active.begin(), obs.already_active.end());
  std::sort(obs.recently_active.begin(), obs.recently_active.end());
  std::sort(obs.live_edges.begin(), obs.live_edges.end());
  std::sort(obs.failed_edges.begin(), obs.failed_edges.end());
  return obs;
}

DiffusionOutcome continue_diffusion(const SocialNetwork& g, const PartialObservation& obs,
                                    std::span<const NodeId> extra_seeds,
                                    const RngStream& replicate) {
  require_probs(g);
  DiffusionOutcome out;
  std::vector<uint8_t> active(g.node_count(), 0);
  std::vector<int8_t> status(g.edge_count(), -1);  // -1 unknown, 0 failed, 1 live
  for (EdgeId e : obs.live_edges) status[e] = 1;
  for (EdgeId e : obs.failed_edges) status[e] = 0;
  for (NodeId u : obs.already_active) active[u] = 1;

  std::vector<NodeId> frontier;
  for (NodeId u : obs.recently_active) frontier.push_back(u);
  for (NodeId u : extra_seeds) {
    if (active[u]) continue;  // already active: dropped, not an error
    active[u] = 1;
    frontier.push_back(u);
  }
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

  int round_cap = static_cast<int>(g.node_count()) + 1;
  int rounds = 0;
  while (!frontier.empty()) {
    if (rounds > round_cap) throw std::logic_error("cascade exceeded round cap");
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (active[v]) continue;
        if (status[e] == 0) continue;  // attempted and failed in phase one
        bool live = status[e] == 1 ? true : edge_live(replicate, g, e);
        if (live) {
          active[v] = 1;
          next.push_back(v);
        } else {
          status[e] = 0;
        }
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    out.newly_active_per_round.push_back(next);
    rounds++;
    frontier.swap(next);
  }
  out.rounds = static_cast<int>(out.newly_active_per_round.size());
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (active[u]) out.activated.push_back(u);
  return out;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0;
    for (double x : xs) s += x;
    return s;
  }
  size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

Estimate summarize(std::span<const double> xs) {
  Estimate est;
  est.samples = static_cast<int64_t>(xs.size());
  if (xs.empty()) return est;
  est.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    std::vector<double> sq(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      double d = xs[i] - est.mean;
      sq[i] = d * d;
    }
    double var = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
    est.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(xs.size()));
  }
  return est;
}

namespace {

// One replicate of total activated benefit from `seeds` on the live graph
// defined by `rep`.
double replicate_benefit(const SocialNetwork& g, const NodeEconomics& econ,
                         std::span<const NodeId> seeds, const RngStream& rep,
                         std::vector<uint32_t>& mark, uint32_t& epoch,
                         std::vector<NodeId>& stack) {
  ++epoch;
  double benefit = 0;
  stack.clear();
  for (NodeId s : seeds) {
    if (mark[s] == epoch) continue;
    mark[s] = epoch;
    stack.push_back(s);
    benefit += econ.benefit[s];
  }
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (EdgeId e : g.out_edges(u)) {
      NodeId v = g.edge(e).dst;
      if (mark[v] == epoch) continue;
      if (edge_live(rep, g, e)) {
        mark[v] = epoch;
        stack.push_back(v);
        benefit += econ.benefit[v];
      }
    }
  }
  return benefit;
}

}  // namespace

Estimate estimate_profit(const SocialNetwork& g, const NodeEconomics& econ,
                         std::span<const NodeId> seeds, int64_t samples, uint64_t master_seed,
                         int threads) {
  require_probs(g);
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  double cost = econ.cost_of(seeds);
  RngStream root = RngStream(master_seed).child("profit");
  std::vector<double> profits(static_cast<size_t>(samples));

#ifdef _OPENMP
  if (threads != 1) {
#pragma omp parallel num_threads(threads > 0 ? threads : omp_get_max_threads())
    {
      std::vector<uint32_t> mark(g.node_count(), 0);
      uint32_t epoch = 0;
      std::vector<NodeId> stack;
#pragma omp for schedule(static)
      for (int64_t r = 0; r < samples; ++r) {
        profits[static_cast<size_t>(r)] =
            replicate_benefit(g, econ, seeds, root.child(static_cast<uint64_t>(r)), mark, epoch,
                              stack) -
            cost;
      }
    }
    return summarize(profits);
  }
#endif
  std::vector<uint32_t> mark(g.node_count(), 0);
  uint32_t epoch = 0;
  std::vector<NodeId> stack;
  for (int64_t r = 0; r < samples; ++r) {
    profits[static_cast<size_t>(r)] =
        replicate_benefit(g, econ, seeds, root.child(static_cast<uint64_t>(r)), mark, epoch,
                          stack) -
        cost;
  }
  return summarize(profits);
}

double marginal_profit_gain(const SocialNetwork& g, const NodeEconomics& econ,
                            std::span<const NodeId> current, NodeId candidate, int64_t samples,
                            uint64_t master_seed, int threads) {
  require_probs(g);
  for (NodeId u : current)
    if (u == candidate) throw std::invalid_argument("candidate already in seed set");
  RngStream root = RngStream(master_seed).child("profit");
  std::vector<double> gains(static_cast<size_t>(samples));

  auto run = [&](int64_t r, std::vector<uint32_t>& mark, uint32_t& epoch,
                 std::vector<NodeId>& stack) {
    RngStream rep = root.child(static_cast<uint64_t>(r));
    // reach of `current` on this replicate's live graph
    ++epoch;
    stack.clear();
    for (NodeId s : current) {
      if (mark[s] == epoch) continue;
      mark[s] = epoch;
      stack.push_back(s);
    }
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (mark[v] != epoch && edge_live(rep, g, e)) {
          mark[v] = epoch;
          stack.push_back(v);
        }
      }
    }
    if (mark[candidate] == epoch) return -econ.cost[candidate];  // dominated: no new benefit
    // nodes reached from candidate and not already covered
    double extra = econ.benefit[candidate];
    mark[candidate] = epoch;
    stack.push_back(candidate);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (EdgeId e : g.out_edges(u)) {
        NodeId v = g.edge(e).dst;
        if (mark[v] != epoch && edge_live(rep, g, e)) {
          mark[v] = epoch;
          stack.push_back(v);
          extra += econ.benefit[v];
        }
      }
    }
    return extra - econ.cost[candidate];
  };

#ifdef _OPENMP
  if (threads != 1) {
#pragma omp parallel num_threads(threads > 0 ? threads : omp_get_max_threads())
    {
      std::vector<uint32_t> mark(g.node_count(), 0);
      uint32_t epoch = 0;
      std::vector<NodeId> stack;
#pragma omp for schedule(static)
      for (int64_t r = 0; r < samples; ++r) gains[static_cast<size_t>(r)] = run(r, mark, epoch, stack);
    }
    return summarize(gains).mean;
  }
#endif
  std::vector<uint32_t> mark(g.node_count(), 0);
  uint32_t epoch = 0;
  std::vector<NodeId> stack;
  for (int64_t r = 0; r < samples; ++r) gains[static_cast<size_t>(r)] = run(r, mark, epoch, stack);
  return summarize(gains).mean;
}

}  // namespace pmax
