#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "chor/expr.hpp"
#include "chor/names.hpp"
#include "chor/value.hpp"

namespace chor {

namespace ch {
struct Nil;
struct Com;
struct Cond;
struct Def;
struct Call;
struct RtSend;
struct RtRecv;
struct Hole;
}  // namespace ch

using ChorNode =
    std::variant<ch::Nil, ch::Com, ch::Cond, ch::Def, ch::Call, ch::RtSend, ch::RtRecv, ch::Hole>;

// Choreographies are immutable trees shared by pointer.
using Chor = std::shared_ptr<const ChorNode>;

// A runtime receive either still waits for its tag to be instantiated or
// already carries the transmitted value.
using Payload = std::variant<Tag, Value>;

namespace ch {
struct Nil {};
// p.e -> q; cont
struct Com {
  ProcessName src;
  Expr expr;
  ProcessName dst;
  Chor cont;
};
// if p.e then {then_branch} else {else_branch}
struct Cond {
  ProcessName decider;
  Expr guard;
  Chor then_branch;
  Chor else_branch;
};
// def X = {body} in cont
struct Def {
  RecVar var;
  Chor body;
  Chor cont;
};
struct Call {
  RecVar var;
};
// p.e ~> [#k]; cont
struct RtSend {
  ProcessName src;
  Expr expr;
  Tag tag;
  Chor cont;
};
// q <~ (p, payload); cont
struct RtRecv {
  ProcessName src;
  Payload payload;
  ProcessName dst;
  Chor cont;
};
// Context hole, "•; cont". Never produced by the parser.
struct Hole {
  Chor cont;
};
}  // namespace ch

Chor nil();
Chor com(ProcessName src, Expr e, ProcessName dst, Chor cont);
Chor cond(ProcessName decider, Expr guard, Chor then_branch, Chor else_branch);
Chor def(RecVar var, Chor body, Chor cont);
Chor call(RecVar var);
Chor rt_send(ProcessName src, Expr e, Tag tag, Chor cont);
Chor rt_recv(ProcessName src, Payload payload, ProcessName dst, Chor cont);
Chor hole(Chor cont);

// Structural equality.
bool same(const Chor& a, const Chor& b);

// Process names. A runtime send contributes its sender, a runtime receive its
// receiver; tags contribute nothing.
ProcessSet pn(const Chor& c);

// Names of a single head action (the node itself, not its continuation).
ProcessSet head_names(const ChorNode& n);

bool is_nil(const Chor& c);
bool has_runtime_terms(const Chor& c);
std::optional<Tag> max_tag(const Chor& c);

// Number of interaction/conditional nodes.
std::size_t action_count(const Chor& c);

// Replaces the continuation of a single-continuation node (Com, RtSend,
// RtRecv, Hole, and the cont of Def). Cond/Call/Nil are returned unchanged.
Chor with_cont(const Chor& c, Chor cont);

// Appends `tail` at every Nil leaf (bodies of definitions included). Calls are
// tail positions and are left alone.
Chor sequence(const Chor& head, const Chor& tail);

// Replaces every RtRecv payload carrying `t` by the value `v`.
Chor instantiate_tag(const Chor& c, Tag t, Value v);

// Replaces calls to `x` in `c` by `body` (calls under a definition rebinding
// `x` are left alone). One application of the unfolding rule.
Chor substitute_call(const Chor& c, const RecVar& x, const Chor& body);

// Removes definitions whose continuation can never reach an action.
Chor collect_garbage(const Chor& c);

// Navigation steps inside a term. `Unfold` passes through a call site, with
// the callee's body materialized in place.
enum class Step : std::uint8_t { Cont, Then, Else, Unfold };
using Path = std::vector<Step>;

}  // namespace chor
