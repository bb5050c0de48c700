#include "pmax/json_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pmax {

void save_instance(const Instance& inst, const std::string& path) {
  nlohmann::json j;
  j["n"] = inst.network.node_count();
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Edge& e : inst.network.edges()) edges.push_back({e.src, e.dst, e.prob});
  j["cost"] = inst.econ.cost;
  j["benefit"] = inst.econ.benefit;
  j["meta"] = {{"seed", inst.seed}, {"scheme", inst.scheme}, {"name", inst.name}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance: " + path);
  out << j.dump(2) << "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance: " + path);
  nlohmann::json j;
  in >> j;
  Instance inst;
  NodeId n = j.at("n").get<NodeId>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>()});
  inst.network = SocialNetwork(n, std::move(edges));
  inst.econ.cost = j.at("cost").get<std::vector<double>>();
  inst.econ.benefit = j.at("benefit").get<std::vector<double>>();
  if (inst.econ.cost.size() != n || inst.econ.benefit.size() != n)
    throw std::runtime_error("cost/benefit length mismatch in " + path);
  for (double c : inst.econ.cost)
    if (!(c > 0)) throw std::runtime_error("node costs must be positive in " + path);
  for (double b : inst.econ.benefit)
    if (b < 0) throw std::runtime_error("node benefits must be non-negative in " + path);
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    inst.seed = m.value("seed", 0ULL);
    inst.scheme = m.value("scheme", std::string());
    inst.name = m.value("name", std::string());
  }
  return inst;
}

}  // namespace pmax
