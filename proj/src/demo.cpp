#include "pmax/demo.hpp"

namespace pmax::demo {

namespace {

SocialNetwork branch4_net() {
  std::vector<Edge> es = {{0, 1, 0.6}, {1, 2, 0.7}, {1, 3, 0.9}};
  return SocialNetwork(4, std::move(es));
}

}  // namespace

InstanceSpec branch4() {
  InstanceSpec inst;
  inst.network = branch4_net();
  inst.econ.cost = {2, 1, 1, 1};
  inst.econ.benefit = {2, 1, 10, 1};
  inst.timestep = 1;
  inst.b2 = 1.0;
  return inst;
}

InstanceSpec branch4_gain() {
  InstanceSpec inst;
  inst.network = branch4_net();
  inst.econ.cost = {3, 1, 1, 1};
  inst.econ.benefit = {2, 9, 4, 2};
  inst.timestep = 1;
  inst.b2 = 1.0;
  return inst;
}

InstanceSpec branch4_loss() {
  InstanceSpec inst;
  inst.network = branch4_net();
  inst.econ.cost = {3, 1, 1, 1};
  inst.econ.benefit = {2, 1, 0, 1};
  inst.timestep = 1;
  inst.b2 = 1.0;
  return inst;
}

InstanceSpec tree6() {
  InstanceSpec inst;
  std::vector<Edge> es = {{0, 1, 0.4}, {0, 2, 0.5}, {1, 3, 0.2}, {1, 4, 0.9}, {2, 5, 0.6}};
  inst.network = SocialNetwork(6, std::move(es));
  inst.econ.cost = {2, 1, 2, 2, 2, 1};
  inst.econ.benefit = {2, 1, 1, 1, 2, 1};
  inst.timestep = 1;
  inst.b2 = 3.0;
  return inst;
}

}  // namespace pmax::demo
