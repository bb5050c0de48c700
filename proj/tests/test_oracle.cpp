#include <stdexcept>
#include <cmath>
#include <map>

#include "doctest.h"
#include "pmax/demo.hpp"
#include "pmax/diffusion.hpp"
#include "pmax/oracle.hpp"

using namespace pmax;

namespace {

// mask from an explicit live-edge list, looked up by (src,dst)
LiveGraphMask mask_of(const SocialNetwork& g, std::initializer_list<std::pair<NodeId, NodeId>> live) {
  LiveGraphMask mask = 0;
  for (auto [s, d] : live) {
    bool found = false;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).src == s && g.edge(e).dst == d) {
        mask |= 1u << e;
        found = true;
      }
    REQUIRE(found);
  }
  return mask;
}

}  // namespace

TEST_CASE("live_graph_probability: reference values") {
  InstanceSpec t6 = demo::tree6();
  CHECK(live_graph_probability(t6.network, 0) == doctest::Approx(0.0096).epsilon(1e-12));
  CHECK(live_graph_probability(t6.network, mask_of(t6.network, {{0, 2}, {1, 4}, {2, 5}})) ==
        doctest::Approx(0.1296).epsilon(1e-12));

  InstanceSpec b4 = demo::branch4();
  CHECK(live_graph_probability(b4.network, mask_of(b4.network, {{1, 2}, {1, 3}})) ==
        doctest::Approx(0.252).epsilon(1e-12));

  SocialNetwork empty(3, {});
  CHECK(live_graph_probability(empty, 0) == doctest::Approx(1.0));
}

TEST_CASE("live_graph_probability: masses sum to one") {
  for (const InstanceSpec& inst : {demo::branch4(), demo::tree6()}) {
    double total = 0;
    for (LiveGraphMask m = 0; m < (1u << inst.network.edge_count()); ++m)
      total += live_graph_probability(inst.network, m);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("live_graph_probability: mass sums to one at the 20-edge scale") {
  RngStream rng(404);
  std::vector<Edge> es;
  for (EdgeId e = 0; e < 20; ++e)
    es.push_back({static_cast<NodeId>(rng.below(2 * e, 10)),
                  static_cast<NodeId>(10 + rng.below(2 * e + 1, 11)), 0.02 + 0.9 * rng.u01(e)});
  SocialNetwork g(21, std::move(es));
  std::vector<double> probs(1u << 20);
  for (uint32_t m = 0; m < (1u << 20); ++m) probs[m] = live_graph_probability(g, m);
  CHECK(pairwise_sum(probs) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact_reachable") {
  SocialNetwork chain(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  std::vector<NodeId> s0 = {0};
  CHECK(exact_reachable(chain, 0b11, s0) == std::vector<NodeId>{0, 1, 2});
  CHECK(exact_reachable(chain, 0, s0) == std::vector<NodeId>{0});

  InstanceSpec t6 = demo::tree6();
  LiveGraphMask m = mask_of(t6.network, {{0, 2}, {2, 5}});
  CHECK(exact_reachable(t6.network, m, s0) == std::vector<NodeId>{0, 2, 5});
}

TEST_CASE("exact_profit: closed forms") {
  NodeEconomics econ;
  econ.cost = {2, 1};
  econ.benefit = {4, 10};
  SocialNetwork g(2, {{0, 1, 0.3}});
  std::vector<NodeId> s0 = {0};
  CHECK(exact_profit(g, econ, s0) == doctest::Approx(4 + 0.3 * 10 - 2));
  CHECK(exact_profit(g, econ, {}) == doctest::Approx(0.0));

  SocialNetwork iso(2, {{1, 0, 0.9}});
  std::vector<NodeId> s1 = {0};
  CHECK(exact_profit(iso, econ, s1) == doctest::Approx(2.0));  // b - C for an isolated seed
}

TEST_CASE("exact_profit: refuses oversized instances") {
  std::vector<Edge> es;
  for (int i = 0; i < 23; ++i) es.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 0.5});
  SocialNetwork g(24, std::move(es));
  NodeEconomics econ;
  econ.cost.assign(24, 1.0);
  econ.benefit.assign(24, 1.0);
  std::vector<NodeId> s = {0};
  CHECK_THROWS_AS(exact_profit(g, econ, s), std::runtime_error);
}

TEST_CASE("two-phase objective: reference totals") {
  InstanceSpec b4 = demo::branch4();
  auto f = [&](std::vector<NodeId> s1) {
    return exact_two_phase_objective(b4.network, b4.econ, s1, 1, 1.0);
  };
  CHECK(f({0}) == doctest::Approx(9.742).epsilon(1e-9));
  CHECK(f({0, 2}) == doctest::Approx(9.96).epsilon(1e-9));
  CHECK(f({0, 3}) == doctest::Approx(8.8).epsilon(1e-9));
  CHECK(f({2}) == doctest::Approx(9.9).epsilon(1e-9));
  CHECK(f({0, 1, 3}) == doctest::Approx(9.7).epsilon(1e-9));
}

TEST_CASE("two-phase objective: empty first phase is zero by convention") {
  InstanceSpec b4 = demo::branch4();
  CHECK(exact_two_phase_objective(b4.network, b4.econ, {}, 1, 1.0) == 0.0);
}

TEST_CASE("two-phase objective equals single-phase profit when b2 is exhausted") {
  InstanceSpec b4 = demo::branch4();
  std::vector<NodeId> s1 = {0, 2};
  double lhs = exact_two_phase_objective(b4.network, b4.econ, s1,
                                         static_cast<int>(b4.network.node_count()) + 1, 0.0);
  double rhs = exact_profit(b4.network, b4.econ, s1);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  InstanceSpec t6 = demo::tree6();
  lhs = exact_two_phase_objective(t6.network, t6.econ, s1,
                                  static_cast<int>(t6.network.node_count()) + 1, 0.0);
  rhs = exact_profit(t6.network, t6.econ, s1);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("observation grouping: total mass and conditional mass") {
  InstanceSpec t6 = demo::tree6();
  std::vector<NodeId> s1 = {0};
  auto groups = group_by_observation(t6.network, t6.econ, s1, 1, t6.b2);
  double total = 0;
  for (const auto& grp : groups) {
    total += grp.prob;
    double member_mass = 0;
    for (LiveGraphMask m : grp.members) member_mass += live_graph_probability(t6.network, m);
    CHECK(member_mass == doctest::Approx(grp.prob).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // one round from node 0 resolves its two out-edges: four distinct observations
  CHECK(groups.size() == 4);
}

TEST_CASE("grouped computation agrees with the direct per-realization sum") {
  for (const InstanceSpec& inst : {demo::branch4(), demo::tree6()}) {
    std::vector<NodeId> s1 = {0};
    double direct = exact_two_phase_objective(inst.network, inst.econ, s1, 1, inst.b2);
    auto groups = group_by_observation(inst.network, inst.econ, s1, 1, inst.b2);
    double grouped = 0;
    for (const auto& grp : groups) grouped += grp.prob * grp.conditional_value;
    CHECK(grouped == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("oracle table: observation columns for a specific realization") {
  // six-node instance, realization where only the 0->2 edge is live: after one
  // round from node 0, node 2 is the recently activated node
  InstanceSpec t6 = demo::tree6();
  std::vector<NodeId> s1 = {0};
  TwoPhaseTable table = exact_two_phase_table(t6.network, t6.econ, s1, 1, t6.b2);
  LiveGraphMask want = mask_of(t6.network, {{0, 2}});
  bool found = false;
  for (const auto& row : table.rows)
    if (row.mask == want) {
      found = true;
      CHECK(row.already_active == std::vector<NodeId>{0, 2});
      CHECK(row.recently_active == std::vector<NodeId>{2});
    }
  CHECK(found);
}

TEST_CASE("oracle table rows carry per-realization detail") {
  InstanceSpec b4 = demo::branch4();
  std::vector<NodeId> s1 = {0};
  TwoPhaseTable table = exact_two_phase_table(b4.network, b4.econ, s1, 1, 1.0);
  REQUIRE(table.rows.size() == 8);
  double total = 0, mass = 0;
  for (const auto& row : table.rows) {
    total += row.contribution;
    mass += row.prob;
    CHECK(row.contribution == doctest::Approx(row.prob * row.profit));
  }
  CHECK(mass == doctest::Approx(1.0));
  CHECK(total == doctest::Approx(table.total));
  CHECK(table.total == doctest::Approx(9.742).epsilon(1e-9));
}

TEST_CASE("sign check on the bundled gain/loss pair") {
  SignCheckReport rep = verify_sign_lemma(demo::branch4_gain(), demo::branch4_loss());
  CHECK(rep.ok);
  CHECK(rep.positive_value == doctest::Approx(12.404).epsilon(1e-9));
  CHECK(rep.negative_value == doctest::Approx(-0.058).epsilon(1e-9));
}

TEST_CASE("zero benefits force a non-positive objective") {
  InstanceSpec inst = demo::branch4();
  inst.econ.benefit = {0, 0, 0, 0};
  std::vector<NodeId> s1 = {0};
  CHECK(exact_two_phase_objective(inst.network, inst.econ, s1, 1, inst.b2) < 0);
}

TEST_CASE("non-monotonicity witness exists on the demo instance") {
  auto w = find_nonmonotone_witness(demo::branch4());
  REQUIRE(w.has_value());
  CHECK(w->f_up > w->f_base);
  CHECK(w->f_down < w->f_base);
}

TEST_CASE("modularity witness: both directions violated on the demo instance") {
  auto w = find_nonsubmodular_witness(demo::branch4());
  REQUIRE(w.has_value());

  // the specific diminishing-returns violation: adding node 3 to {0} loses
  // more than adding it to the superset {0,1}
  InstanceSpec b4 = demo::branch4();
  auto f = [&](std::vector<NodeId> s) {
    if (s.empty()) return 0.0;
    return exact_two_phase_objective(b4.network, b4.econ, s, 1, 1.0);
  };
  double ds = f({0, 3}) - f({0});
  double dt = f({0, 1, 3}) - f({0, 1});
  CHECK(ds < dt);  // submodularity would require ds >= dt
  // and the supermodularity counterpart with node 2
  double es = f({2}) - f({});
  double et = f({0, 2}) - f({0});
  CHECK(es > et);  // supermodularity would require es <= et
}

TEST_CASE("all-zero benefits make the objective monotone decreasing in cost") {
  InstanceSpec inst = demo::branch4();
  inst.econ.benefit = {0, 0, 0, 0};
  // no increasing direction can exist
  auto f = [&](std::vector<NodeId> s) {
    return exact_two_phase_objective(inst.network, inst.econ, s, 1, inst.b2);
  };
  CHECK(f({0}) >= f({0, 2}));
  CHECK(f({0}) >= f({0, 3}));
}

TEST_CASE("simulated observations hit each enumeration group at its probability") {
  // one observed round from node 0 on the six-node instance resolves its two
  // out-edges; the four resulting observation classes must appear with the
  // enumerated masses 0.3 / 0.2 / 0.3 / 0.2
  InstanceSpec t6 = demo::tree6();
  std::vector<NodeId> s1 = {0};
  auto groups = group_by_observation(t6.network, t6.econ, s1, 1, t6.b2);
  REQUIRE(groups.size() == 4);

  std::map<std::string, int> counts;
  RngStream root(90210);
  const int trials = 40000;
  for (int r = 0; r < trials; ++r) {
    PartialObservation obs = simulate_to_timestep(t6.network, s1, 1, root.child(r));
    std::string key;
    for (NodeId u : obs.already_active) key += std::to_string(u) + ",";
    key += "|";
    for (NodeId u : obs.recently_active) key += std::to_string(u) + ",";
    counts[key]++;
  }
  REQUIRE(counts.size() == 4);
  // match by active-set signature
  for (const auto& grp : groups) {
    // group key format: "active|recent|edges" — compare on the first two parts
    std::string sig = grp.key.substr(0, grp.key.rfind('|'));
    auto it = counts.find(sig);
    REQUIRE(it != counts.end());
    double freq = static_cast<double>(it->second) / trials;
    double sd = std::sqrt(grp.prob * (1 - grp.prob) / trials);
    CHECK(std::abs(freq - grp.prob) <= 4 * sd);
  }
}

TEST_CASE("grouped oracle and direct sum agree on random instances") {
  RngStream rng(8086);
  uint64_t c = 0;
  for (int k = 0; k < 10; ++k) {
    NodeId n = 4 + static_cast<NodeId>(rng.below(c++, 3));
    std::vector<Edge> es;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v)
        if (u != v && rng.u01(c++) < 0.3 && es.size() < 9)
          es.push_back({u, v, 0.1 + 0.8 * rng.u01(c++)});
    if (es.empty()) es.push_back({0, 1, 0.4});
    InstanceSpec inst;
    inst.network = SocialNetwork(n, std::move(es));
    inst.econ.cost.resize(n);
    inst.econ.benefit.resize(n);
    for (NodeId u = 0; u < n; ++u) {
      inst.econ.cost[u] = 1 + 2 * rng.u01(c++);
      inst.econ.benefit[u] = 6 * rng.u01(c++);
    }
    std::vector<NodeId> s1 = {0};
    int d = 1 + static_cast<int>(rng.below(c++, 2));
    double b2 = 1 + 2 * rng.u01(c++);
    double direct = exact_two_phase_objective(inst.network, inst.econ, s1, d, b2);
    auto groups = group_by_observation(inst.network, inst.econ, s1, d, b2);
    double grouped = 0, mass = 0;
    for (const auto& grp : groups) {
      grouped += grp.prob * grp.conditional_value;
      mass += grp.prob;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(grouped == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("subadditivity holds on random small instances") {
  RngStream rng(2027);
  uint64_t c = 0;
  for (int inst_idx = 0; inst_idx < 3; ++inst_idx) {
    // 4 nodes / 3 random edges, economics in the standard intervals
    std::vector<Edge> es;
    while (es.size() < 3) {
      NodeId u = static_cast<NodeId>(rng.below(c++, 4));
      NodeId v = static_cast<NodeId>(rng.below(c++, 4));
      if (u == v) continue;
      bool dup = false;
      for (const Edge& e : es)
        if (e.src == u && e.dst == v) dup = true;
      if (dup) continue;
      double levels[3] = {0.1, 0.01, 0.001};
      es.push_back({u, v, levels[rng.below(c++, 3)]});
    }
    InstanceSpec inst;
    inst.network = SocialNetwork(4, std::move(es));
    inst.econ.cost.resize(4);
    inst.econ.benefit.resize(4);
    for (int u = 0; u < 4; ++u) {
      inst.econ.cost[u] = 50 + 50 * rng.u01(c++);
      inst.econ.benefit[u] = 800 + 200 * rng.u01(c++);
    }
    inst.timestep = 1;
    inst.b2 = 100;
    SubadditivityReport rep = check_subadditivity(inst, 80, 99 + inst_idx);
    CHECK(rep.violations == 0);
    CHECK(rep.checked > 0);
  }
}
