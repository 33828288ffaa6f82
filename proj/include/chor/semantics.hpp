#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chor/choreography.hpp"
#include "chor/errors.hpp"
#include "chor/value.hpp"

namespace chor {

enum class Rule : std::uint8_t { Com, Then, Else, ComS, ComR };

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);

// Which rule fired where. Communications have subjects (sender, receiver),
// conditionals (decider).
struct StepLabel {
  Rule rule = Rule::Com;
  std::vector<ProcessName> subjects;
  std::optional<Value> value;
  std::optional<Tag> tag;
  Path path;

  // "ComS p->q v=1"; the part used to match choreography and network steps.
  std::string signature() const;
};

bool same_step(const StepLabel& a, const StepLabel& b);

struct Configuration {
  Chor chor;
  GlobalState state;
};

struct Transition {
  StepLabel label;
  Configuration target;
};

enum class Mode : std::uint8_t { Sync, Async };

// An enabled action, possibly occurring at several positions (the copies of
// one action in both branches of enclosing conditionals).
struct Redex {
  enum class Kind : std::uint8_t { Com, Cond, Send, Recv };
  Kind kind = Kind::Com;
  ProcessName first;   // sender, or decider
  ProcessName second;  // receiver (empty for conditionals)
  Expr expr;           // communicated expression or guard
  std::optional<Tag> tag;
  std::optional<Value> value;  // payload of an instantiated receive
  std::vector<Path> paths;     // sorted; paths.front() is the leftmost
  std::string key;
};

// Actions executable after any swaps of the structural precongruence, found by
// interference analysis: an action is enabled iff no node before it on its
// path shares a process name with it. Definitions are transparent and each
// call is unfolded at most once per path. Ordered leftmost first.
std::vector<Redex> redexes(const Chor& c, Mode mode);

// Fires a redex. Successors are garbage-collected.
Transition fire(const Configuration& cfg, const Redex& r, Mode mode);

std::vector<Transition> enabled(const Configuration& cfg, Mode mode);
std::vector<Transition> enabled_sync(const Configuration& cfg);
std::vector<Transition> enabled_async(const Configuration& cfg);

// Fire a specific synchronous redex. NotEnabled if `r` is not among the
// current redexes or has the wrong kind; GuardNotBoolean for a guard that
// does not evaluate to a boolean.
Configuration step_com(const Configuration& cfg, const Redex& r);
Configuration step_cond(const Configuration& cfg, const Redex& r);

// Rewrites the nodes at `paths` with `f`. Paths may pass through call sites
// (Step::Unfold), in which case the callee body is materialized there.
using NodeRewriter = std::function<Chor(const Chor&)>;
Chor rewrite_at(const Chor& c, const std::vector<Path>& paths, const NodeRewriter& f);

// Replaces every hole `•; k` by `fill(k)`.
Chor fill_holes(const Chor& c, const NodeRewriter& fill);

}  // namespace chor
