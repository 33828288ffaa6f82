#pragma once

#include <optional>
#include <string>

#include "chor/choreography.hpp"
#include "chor/errors.hpp"

namespace chor {

// p.e -> q  ⪯  p.e ~> [x]; q <~ (p, x) with x fresh. NotACom if the node at
// `at` is not a communication.
Chor unfold_com(const Chor& c, const Path& at, TagSupply& supply);

// A supply whose tags are all above those occurring in `c`.
TagSupply supply_above(const Chor& c);

enum class NextVerdict : std::uint8_t { Comm, Cond, Hole, Undefined };

const char* verdict_name(NextVerdict v);

// The next action of `r` in a context: a communication, a conditional, or
// the hole. Definitions are unfolded once into their continuation.
NextVerdict next_action(const Chor& ctx, const ProcessName& r);

struct WellFormedness {
  bool ok = false;
  Chor folded;     // runtime sends folded back into communications
  Chor canonical;  // normal form of `folded`
  std::string diagnosis;
};

// A runtime choreography is well-formed when it can arise from executing a
// program: every runtime send folds with its receive into a communication,
// and every instantiated receive q <~ (p, v) is reachable by swaps for a send
// of p placed at the top.
WellFormedness well_formed(const Chor& c);

}  // namespace chor
