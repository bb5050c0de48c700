#include "pmax/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace pmax {

SocialNetwork::SocialNetwork(NodeId n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  offsets_.assign(n_ + 1, 0);
  in_degree_.assign(n_, 0);
  for (const Edge& e : edges_) {
    if (e.src >= n_ || e.dst >= n_) throw std::invalid_argument("edge endpoint out of range");
    offsets_[e.src + 1]++;
    in_degree_[e.dst]++;
  }
  for (NodeId u = 0; u < n_; ++u) offsets_[u + 1] += offsets_[u];
  out_ids_.resize(edges_.size());
  std::vector<uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId e = 0; e < edges_.size(); ++e) out_ids_[cursor[edges_[e].src]++] = e;
  for (NodeId u = 0; u < n_; ++u) {
    auto b = out_ids_.begin() + offsets_[u];
    auto t = out_ids_.begin() + offsets_[u + 1];
    std::sort(b, t, [this](EdgeId a, EdgeId c) { return edges_[a].dst < edges_[c].dst; });
  }
  has_probs_ = !edges_.empty();
  for (const Edge& e : edges_)
    if (e.prob < 0) has_probs_ = false;
  if (has_probs_) {
    for (const Edge& e : edges_)
      if (e.prob <= 0.0 || e.prob > 1.0)
        throw std::invalid_argument("edge probability outside (0,1]");
  }
  if (edges_.empty() && n_ > 0) has_probs_ = true;  // nothing to assign
}

double SocialNetwork::mean_edge_probability() const {
  if (edges_.empty()) return 0.0;
  double s = 0;
  for (const Edge& e : edges_) s += e.prob;
  return s / static_cast<double>(edges_.size());
}

SocialNetwork SocialNetwork::with_probabilities(std::vector<double> probs) const {
  if (probs.size() != edges_.size()) throw std::invalid_argument("probability vector length mismatch");
  std::vector<Edge> es = edges_;
  for (size_t i = 0; i < es.size(); ++i) es[i].prob = probs[i];
  return SocialNetwork(n_, std::move(es));
}

IngestResult build_network(const std::vector<RawEdge>& raw, const IngestOptions& options) {
  IngestReport report;
  std::unordered_map<int64_t, NodeId> relabel;
  std::vector<Edge> kept;
  kept.reserve(raw.size() * (options.symmetrize ? 2 : 1));

  auto map_id = [&](int64_t v) -> NodeId {
    if (!options.relabel) {
      if (v < 0) throw std::runtime_error("negative node id requires relabel");
      return static_cast<NodeId>(v);
    }
    auto it = relabel.find(v);
    if (it != relabel.end()) return it->second;
    NodeId id = static_cast<NodeId>(report.original_ids.size());
    relabel.emplace(v, id);
    report.original_ids.push_back(v);
    return id;
  };

  for (const RawEdge& e : raw) {
    NodeId s = map_id(e.src), d = map_id(e.dst);
    if (s == d) {
      if (options.drop_self_loops) {
        report.self_loops_dropped++;
        continue;
      }
      throw std::runtime_error("self-loop present and drop_self_loops unset");
    }
    kept.push_back({s, d, e.prob});
    if (options.symmetrize) kept.push_back({d, s, e.prob});
  }

  NodeId n = 0;
  for (const Edge& e : kept) n = std::max({n, e.src + 1, e.dst + 1});
  if (!options.relabel) {
    // identity mapping for reporting
    report.original_ids.resize(n);
    for (NodeId u = 0; u < n; ++u) report.original_ids[u] = u;
  }
  if (n == 0) throw std::runtime_error("empty graph");

  if (options.dedupe) {
    std::unordered_set<uint64_t> seen;
    seen.reserve(kept.size() * 2);
    std::vector<Edge> unique;
    unique.reserve(kept.size());
    for (const Edge& e : kept) {
      uint64_t key = (static_cast<uint64_t>(e.src) << 32) | e.dst;
      if (seen.insert(key).second)
        unique.push_back(e);  // first occurrence wins
      else
        report.duplicates_dropped++;
    }
    kept.swap(unique);
  }

  return {SocialNetwork(n, std::move(kept)), std::move(report)};
}

IngestResult ingest_edge_list(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<RawEdge> raw;
  std::string line;
  uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    int64_t s, d;
    if (!(ss >> s >> d)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed line");
    double p = -1.0;
    if (ss >> p) {
      if (p <= 0.0 || p > 1.0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": probability outside (0,1]");
    } else {
      ss.clear();
    }
    std::string rest;
    if (ss >> rest) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": trailing tokens");
    raw.push_back({s, d, p});
  }
  IngestResult res = build_network(raw, options);
  res.report.lines_read = lineno;
  return res;
}

SocialNetwork assign_weights(const SocialNetwork& g, const AssignmentSpec& spec) {
  static const double kTrivalency[3] = {0.1, 0.01, 0.001};
  RngStream stream = RngStream(spec.master_seed).child("weights");
  std::vector<double> probs(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    switch (spec.weighting) {
      case WeightScheme::Trivalency:
        probs[e] = kTrivalency[stream.below(e, 3)];
        break;
      case WeightScheme::Constant:
        probs[e] = spec.constant_p;
        break;
      case WeightScheme::FromFile:
        probs[e] = g.edge(e).prob;
        if (probs[e] < 0) throw std::runtime_error("from_file weighting but edge has no probability");
        break;
    }
  }
  return g.with_probabilities(std::move(probs));
}

NodeEconomics assign_economics(const SocialNetwork& g, const AssignmentSpec& spec) {
  if (!(spec.cost_lo > 0) || spec.cost_lo > spec.cost_hi || spec.benefit_lo < 0 ||
      spec.benefit_lo > spec.benefit_hi)
    throw std::invalid_argument("invalid cost/benefit intervals");
  RngStream econ = RngStream(spec.master_seed).child("econ");
  RngStream cost_s = econ.child("cost");
  RngStream benefit_s = econ.child("benefit");
  NodeEconomics e;
  e.cost.resize(g.node_count());
  e.benefit.resize(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    e.cost[u] = cost_s.uniform(u, spec.cost_lo, spec.cost_hi);
    e.benefit[u] = benefit_s.uniform(u, spec.benefit_lo, spec.benefit_hi);
  }
  return e;
}

NetworkView::NetworkView(const SocialNetwork& g, const std::vector<NodeId>& excluded) : g_(&g) {
  excluded_.assign(g.node_count(), 0);
  for (NodeId u : excluded) excluded_[u] = 1;
  out_degree_.assign(g.node_count(), 0);
  in_degree_.assign(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (!excluded_[u]) live_nodes_++;
  for (const Edge& e : g.edges()) {
    if (excluded_[e.src] || excluded_[e.dst]) continue;
    out_degree_[e.src]++;
    in_degree_[e.dst]++;
    live_edges_++;
  }
}

std::vector<NodeId> NetworkView::nodes() const {
  std::vector<NodeId> out;
  out.reserve(live_nodes_);
  for (NodeId u = 0; u < g_->node_count(); ++u)
    if (!excluded_[u]) out.push_back(u);
  return out;
}

}  // namespace pmax
