#pragma once

#include "pmax/graph.hpp"
#include "pmax/oracle.hpp"

namespace pmax::demo {

// Small hand-checkable instances used by the lemma checks, the oracle CLI and
// the test suite. Objective values on them are known in closed form.

// 4 nodes: 0->1, 1->2, 1->3 with probabilities .6/.7/.9.
// Economics give node 2 a large benefit; phase-2 budget 1 forces one pick.
InstanceSpec branch4();

// Same structure, benefit-heavy variant (objective strictly positive).
InstanceSpec branch4_gain();

// Same structure, cost-heavy variant (objective strictly negative).
InstanceSpec branch4_loss();

// 6 nodes: 0->{1,2}, 1->{3,4}, 2->5; probabilities .4/.5/.2/.9/.6.
InstanceSpec tree6();

}  // namespace pmax::demo
