// Serial vs OpenMP comparison for the two hot kernels: Monte Carlo profit
// estimation and exact live-graph enumeration. The parallel paths must
// reproduce the serial results bit for bit.

#include <chrono>
#include <cstdio>

#include "pmax/diffusion.hpp"
#include "pmax/graph.hpp"
#include "pmax/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace pmax;

namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

SocialNetwork random_graph(NodeId n, EdgeId m, uint64_t seed) {
  RngStream rng(seed);
  std::vector<Edge> edges;
  uint64_t c = 0;
  while (edges.size() < m) {
    NodeId u = static_cast<NodeId>(rng.below(c++, n));
    NodeId v = static_cast<NodeId>(rng.below(c++, n));
    if (u == v) continue;
    edges.push_back({u, v, 0.05 + 0.2 * rng.u01(c++)});
  }
  IngestOptions opt;
  opt.relabel = false;
  std::vector<RawEdge> raw;
  for (const Edge& e : edges) raw.push_back({e.src, e.dst, e.prob});
  return build_network(raw, opt).network;
}

}  // namespace

int main() {
#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif
  std::printf("threads available: %d\n\n", max_threads);

  {
    SocialNetwork g = random_graph(2000, 12000, 99);
    NodeEconomics econ;
    econ.cost.assign(g.node_count(), 10.0);
    econ.benefit.assign(g.node_count(), 100.0);
    std::vector<NodeId> seeds = {0, 1, 2, 3, 4, 5, 6, 7};
    const int64_t samples = 200000;

    double t0 = now_s();
    Estimate serial = estimate_profit(g, econ, seeds, samples, 42, 1);
    double ts = now_s() - t0;
    t0 = now_s();
    Estimate parallel = estimate_profit(g, econ, seeds, samples, 42, 0);
    double tp = now_s() - t0;
    bool identical = serial.mean == parallel.mean && serial.stderr_ == parallel.stderr_;
    std::printf("monte carlo profit, %lld samples on n=%u m=%u\n", (long long)samples,
                g.node_count(), g.edge_count());
    std::printf("  serial   %.3fs  mean %.6f\n", ts, serial.mean);
    std::printf("  parallel %.3fs  mean %.6f  speedup %.2fx  bit-identical: %s\n\n", tp,
                parallel.mean, ts / tp, identical ? "yes" : "NO");
  }

  {
    SocialNetwork g = random_graph(16, 20, 7);
    NodeEconomics econ;
    econ.cost.assign(g.node_count(), 2.0);
    econ.benefit.assign(g.node_count(), 5.0);
    std::vector<NodeId> seeds = {0, 1};

    double t0 = now_s();
    double serial = exact_profit(g, econ, seeds, 1);
    double ts = now_s() - t0;
    t0 = now_s();
    double parallel = exact_profit(g, econ, seeds, 0);
    double tp = now_s() - t0;
    std::printf("exact enumeration, 2^%u realizations on n=%u\n", g.edge_count(), g.node_count());
    std::printf("  serial   %.3fs  value %.9f\n", ts, serial);
    std::printf("  parallel %.3fs  value %.9f  speedup %.2fx  bit-identical: %s\n", tp, parallel,
                ts / tp, serial == parallel ? "yes" : "NO");
  }
  return 0;
}
