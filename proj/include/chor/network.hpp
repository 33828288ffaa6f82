#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "chor/expr.hpp"
#include "chor/names.hpp"
#include "chor/value.hpp"

namespace chor {

namespace bh {
struct Nil;
struct Send;
struct Recv;
struct Cond;
struct Def;
struct Call;
}  // namespace bh

using BehaviourNode = std::variant<bh::Nil, bh::Send, bh::Recv, bh::Cond, bh::Def, bh::Call>;
using Behaviour = std::shared_ptr<const BehaviourNode>;

namespace bh {
struct Nil {};
// q!e; cont
struct Send {
  ProcessName dst;
  Expr expr;
  Behaviour cont;
};
// p?; cont
struct Recv {
  ProcessName src;
  Behaviour cont;
};
// if e then {then_branch} else {else_branch}; cont
struct Cond {
  Expr guard;
  Behaviour then_branch;
  Behaviour else_branch;
  Behaviour cont;
};
struct Def {
  RecVar var;
  Behaviour body;
  Behaviour cont;
};
struct Call {
  RecVar var;
};
}  // namespace bh

Behaviour b_nil();
Behaviour b_send(ProcessName dst, Expr e, Behaviour cont);
Behaviour b_recv(ProcessName src, Behaviour cont);
Behaviour b_cond(Expr guard, Behaviour then_branch, Behaviour else_branch, Behaviour cont);
Behaviour b_def(RecVar var, Behaviour body, Behaviour cont);
Behaviour b_call(RecVar var);

bool same(const Behaviour& a, const Behaviour& b);
bool is_nil(const Behaviour& b);

// Appends `tail` at every Nil leaf; calls are tail positions.
Behaviour sequence(const Behaviour& head, const Behaviour& tail);

// True when no send, receive or conditional is reachable, even through calls.
bool is_inert(const Behaviour& b);

// Inert behaviours (including `def X = B in 0`) collapse to 0.
Behaviour normalize_behaviour(const Behaviour& b);

// Replaces calls to `var` by `body`, except under a definition rebinding it.
Behaviour substitute_call(const Behaviour& b, const RecVar& var, const Behaviour& body);

// Every behaviour obtained by one unfolding of a definition into its
// continuation or into an enclosing body.
std::vector<Behaviour> unfold_once(const Behaviour& b);

struct Message {
  ProcessName sender;
  Value payload;
  friend bool operator==(const Message&, const Message&) = default;
};

// Incoming messages, kept as one FIFO lane per sender. Two queues related by
// swapping adjacent messages from distinct senders have the same lanes.
class MessageQueue {
 public:
  MessageQueue() = default;

  static MessageQueue from_sequence(const std::vector<Message>& msgs);

  bool empty() const { return lanes_.empty(); }
  std::size_t size() const;
  std::size_t lane_depth(const ProcessName& sender) const;

  const std::map<ProcessName, std::deque<Value>>& lanes() const { return lanes_; }

  // Total messages ever appended per sender (diagnostics only).
  std::uint64_t arrivals(const ProcessName& sender) const;

  // Lane-by-lane listing in sender order; a representative of the class.
  std::vector<Message> to_sequence() const;

  // Equality ignores the arrival counters.
  friend bool operator==(const MessageQueue& a, const MessageQueue& b) {
    return a.lanes_ == b.lanes_;
  }

 private:
  friend MessageQueue enqueue(const MessageQueue&, const Message&);
  friend std::optional<std::pair<Value, MessageQueue>> dequeue_from(const MessageQueue&,
                                                                    const ProcessName&);
  std::map<ProcessName, std::deque<Value>> lanes_;
  std::map<ProcessName, std::uint64_t> arrivals_;
};

// Appends at the tail of the sender's lane.
MessageQueue enqueue(const MessageQueue& q, const Message& m);

// Head of p's lane and the remaining queue; nullopt when p's lane is empty.
std::optional<std::pair<Value, MessageQueue>> dequeue_from(const MessageQueue& q,
                                                           const ProcessName& p);

struct Process {
  Value state;
  MessageQueue queue;
  Behaviour behaviour;
};

// Finite parallel composition of named processes, kept sorted by name.
class Network {
 public:
  Network() = default;

  bool empty() const { return procs_.empty(); }
  std::size_t size() const { return procs_.size(); }
  bool contains(const ProcessName& p) const { return procs_.count(p) != 0; }
  const Process& at(const ProcessName& p) const;

  // Returns false if p was already present.
  bool add(const ProcessName& p, Process proc);
  void set(const ProcessName& p, Process proc) { procs_[p] = std::move(proc); }
  void erase(const ProcessName& p) { procs_.erase(p); }

  const std::map<ProcessName, Process>& processes() const { return procs_; }

  bool all_queues_empty() const;

 private:
  std::map<ProcessName, Process> procs_;
};

// Structural equality: states, lanes and behaviours.
bool same(const Network& a, const Network& b);

}  // namespace chor
