#pragma once

#include <string>

#include "pmax/graph.hpp"

namespace pmax {

// Canonical instance interchange:
// {"n":..., "edges":[[u,v,p],...], "cost":[...], "benefit":[...],
//  "meta":{"seed":..., "scheme":"..."}}
struct Instance {
  SocialNetwork network;
  NodeEconomics econ;
  uint64_t seed = 0;
  std::string scheme;
  std::string name;
};

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace pmax
