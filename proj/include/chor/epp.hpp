#pragma once

#include <vector>

#include "chor/choreography.hpp"
#include "chor/errors.hpp"
#include "chor/network.hpp"
#include "chor/value.hpp"

namespace chor {

// Behaviour of `r` in `c`. A conditional projects to a conditional at its
// decider and, elsewhere, to the branch projection, which must be the same in
// both branches (NotProjectable otherwise). Instantiated receives project to
// receives at their receiver. IllFormed on runtime sends or tagged receives.
Behaviour project_behaviour(const Chor& c, const ProcessName& r);

// Messages in transit to `r`, in the order their receives occur.
std::vector<Message> project_queue(const Chor& c, const ProcessName& r);

// One process per name in pn(c). IllFormed if `c` has runtime terms.
Network epp_sync(const Chor& c, const GlobalState& sigma);

// Projects the folded form of a well-formed choreography, queues
// included. IllFormed with a diagnosis when `c` is not well-formed.
Network epp_async(const Chor& c, const GlobalState& sigma);

bool projectable(const Chor& c);

}  // namespace chor
