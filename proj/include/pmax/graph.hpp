#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmax/rng.hpp"

namespace pmax {

using NodeId = uint32_t;
using EdgeId = uint32_t;

struct Edge {
  NodeId src;
  NodeId dst;
  double prob;  // influence probability in (0,1]; <0 means unassigned
};

// Immutable directed graph with per-edge influence probabilities.
// Out-adjacency is CSR; safe to share across threads after construction.
class SocialNetwork {
 public:
  SocialNetwork() = default;
  SocialNetwork(NodeId n, std::vector<Edge> edges);

  NodeId node_count() const { return n_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  // edge ids leaving u, sorted by target
  std::span<const EdgeId> out_edges(NodeId u) const {
    return {out_ids_.data() + offsets_[u], out_ids_.data() + offsets_[u + 1]};
  }
  uint32_t out_degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  uint32_t in_degree(NodeId u) const { return in_degree_[u]; }

  bool has_probabilities() const { return has_probs_; }
  double mean_edge_probability() const;

  SocialNetwork with_probabilities(std::vector<double> probs) const;

 private:
  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<uint32_t> offsets_;   // size n+1
  std::vector<EdgeId> out_ids_;     // size m
  std::vector<uint32_t> in_degree_;
  bool has_probs_ = false;
};

struct NodeEconomics {
  std::vector<double> cost;     // C(u) > 0
  std::vector<double> benefit;  // b(u) >= 0

  double cost_of(std::span<const NodeId> nodes) const {
    double c = 0;
    for (NodeId u : nodes) c += cost[u];
    return c;
  }
};

struct IngestOptions {
  bool symmetrize = false;
  bool dedupe = true;
  bool drop_self_loops = true;
  bool relabel = true;
};

struct IngestReport {
  std::vector<int64_t> original_ids;  // dense id -> raw id (identity when relabel=false)
  uint64_t self_loops_dropped = 0;
  uint64_t duplicates_dropped = 0;
  uint64_t lines_read = 0;
};

struct IngestResult {
  SocialNetwork network;
  IngestReport report;
};

enum class WeightScheme { Trivalency, Constant, FromFile };

struct AssignmentSpec {
  WeightScheme weighting = WeightScheme::Trivalency;
  double constant_p = 0.1;
  double cost_lo = 50.0, cost_hi = 100.0;
  double benefit_lo = 800.0, benefit_hi = 1000.0;
  uint64_t master_seed = 1;
};

// Raw triple as read from a file; ids may be arbitrary non-dense integers.
struct RawEdge {
  int64_t src;
  int64_t dst;
  double prob;  // <0 when the line had no probability column
};

IngestResult ingest_edge_list(const std::string& path, const IngestOptions& options);

// Build a network directly from (src,dst[,prob]) triples; used by tests and
// the JSON loader. Applies the same normalization as file ingestion.
IngestResult build_network(const std::vector<RawEdge>& raw, const IngestOptions& options);

SocialNetwork assign_weights(const SocialNetwork& g, const AssignmentSpec& spec);
NodeEconomics assign_economics(const SocialNetwork& g, const AssignmentSpec& spec);

// Logical node-induced subgraph: nodes outside `excluded` and edges whose
// both endpoints survive. The underlying network is untouched.
class NetworkView {
 public:
  NetworkView(const SocialNetwork& g, const std::vector<NodeId>& excluded);

  const SocialNetwork& base() const { return *g_; }
  bool present(NodeId u) const { return !excluded_[u]; }
  NodeId node_count() const { return live_nodes_; }
  EdgeId edge_count() const { return live_edges_; }
  uint32_t out_degree(NodeId u) const { return out_degree_[u]; }
  uint32_t in_degree(NodeId u) const { return in_degree_[u]; }
  // nodes present in the view, ascending
  std::vector<NodeId> nodes() const;

 private:
  const SocialNetwork* g_;
  std::vector<uint8_t> excluded_;
  std::vector<uint32_t> out_degree_;
  std::vector<uint32_t> in_degree_;
  NodeId live_nodes_ = 0;
  EdgeId live_edges_ = 0;
};

inline NetworkView residual_view(const SocialNetwork& g, const std::vector<NodeId>& excluded) {
  return NetworkView(g, excluded);
}

}  // namespace pmax
