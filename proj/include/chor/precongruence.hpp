#pragma once

#include <string>
#include <vector>

#include "chor/choreography.hpp"
#include "chor/semantics.hpp"

namespace chor {

enum class Answer : std::uint8_t { No, Yes, Unknown };

const char* answer_name(Answer a);

// Canonical representative of the swap-equivalence class (after garbage
// collection). Repeatedly lifts the least action or conditional that can be
// brought to the top; instantiated receives first, then communications,
// sends, pending receives and conditionals, ties broken by rendering.
// Conditionals are not lifted out of definitions and calls are never
// unfolded.
Chor normal_form(const Chor& c);

std::string canonical_key(const Chor& c);
std::string config_key(const Configuration& cfg);

// Every term obtained by one application of the unfolding rule.
std::vector<Chor> unfold_once(const Chor& c);

// Decides c1 ⪯ c2 by comparing normal forms, applying at most
// `unfold_budget` unfoldings to c1. Unknown when the budget ran out while
// unfoldings were still possible.
Answer precongruent(const Chor& c1, const Chor& c2, unsigned unfold_budget);

// Equal states and choreographies related by ⪯ in either direction.
bool equivalent_configs(const Configuration& a, const Configuration& b, unsigned unfold_budget = 1);

}  // namespace chor
