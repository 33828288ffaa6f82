#include "chor/network.hpp"

#include <set>
#include <stdexcept>

#include "chor/value.hpp"

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Behaviour make(BehaviourNode n) { return std::make_shared<const BehaviourNode>(std::move(n)); }

}  // namespace

Behaviour b_nil() {
  static const Behaviour n = make(bh::Nil{});
  return n;
}
Behaviour b_send(ProcessName dst, Expr e, Behaviour cont) {
  return make(bh::Send{std::move(dst), std::move(e), std::move(cont)});
}
Behaviour b_recv(ProcessName src, Behaviour cont) {
  return make(bh::Recv{std::move(src), std::move(cont)});
}
Behaviour b_cond(Expr guard, Behaviour then_branch, Behaviour else_branch, Behaviour cont) {
  return make(bh::Cond{std::move(guard), std::move(then_branch), std::move(else_branch),
                       std::move(cont)});
}
Behaviour b_def(RecVar var, Behaviour body, Behaviour cont) {
  return make(bh::Def{std::move(var), std::move(body), std::move(cont)});
}
Behaviour b_call(RecVar var) { return make(bh::Call{std::move(var)}); }

bool same(const Behaviour& a, const Behaviour& b) {
  if (a == b) return true;
  if (a->index() != b->index()) return false;
  return std::visit(overloaded{
                        [&](const bh::Nil&) { return true; },
                        [&](const bh::Send& x) {
                          const auto& y = std::get<bh::Send>(*b);
                          return x.dst == y.dst && x.expr == y.expr && same(x.cont, y.cont);
                        },
                        [&](const bh::Recv& x) {
                          const auto& y = std::get<bh::Recv>(*b);
                          return x.src == y.src && same(x.cont, y.cont);
                        },
                        [&](const bh::Cond& x) {
                          const auto& y = std::get<bh::Cond>(*b);
                          return x.guard == y.guard && same(x.then_branch, y.then_branch) &&
                                 same(x.else_branch, y.else_branch) && same(x.cont, y.cont);
                        },
                        [&](const bh::Def& x) {
                          const auto& y = std::get<bh::Def>(*b);
                          return x.var == y.var && same(x.body, y.body) && same(x.cont, y.cont);
                        },
                        [&](const bh::Call& x) { return x.var == std::get<bh::Call>(*b).var; },
                    },
                    *a);
}

bool is_nil(const Behaviour& b) { return std::holds_alternative<bh::Nil>(*b); }

Behaviour sequence(const Behaviour& head, const Behaviour& tail) {
  if (is_nil(tail)) return head;
  return std::visit(
      overloaded{
          [&](const bh::Nil&) { return tail; },
          [&](const bh::Call&) { return head; },
          [&](const bh::Send& x) { return b_send(x.dst, x.expr, sequence(x.cont, tail)); },
          [&](const bh::Recv& x) { return b_recv(x.src, sequence(x.cont, tail)); },
          [&](const bh::Cond& x) {
            return b_cond(x.guard, x.then_branch, x.else_branch, sequence(x.cont, tail));
          },
          [&](const bh::Def& x) {
            return b_def(x.var, sequence(x.body, tail), sequence(x.cont, tail));
          },
      },
      *head);
}

namespace {

using BEnv = std::map<RecVar, Behaviour>;

bool inert(const Behaviour& b, const BEnv& env, std::set<RecVar>& visited) {
  return std::visit(overloaded{
                        [&](const bh::Nil&) { return true; },
                        [&](const bh::Call& x) {
                          if (!visited.insert(x.var).second) return true;
                          auto it = env.find(x.var);
                          return it == env.end() || inert(it->second, env, visited);
                        },
                        [&](const bh::Def& x) {
                          BEnv inner = env;
                          inner[x.var] = x.body;
                          return inert(x.cont, inner, visited);
                        },
                        [&](const auto&) { return false; },
                    },
                    *b);
}

Behaviour normalize(const Behaviour& b, const BEnv& env) {
  return std::visit(
      overloaded{
          [&](const bh::Nil&) { return b; },
          [&](const bh::Call&) { return b; },
          [&](const bh::Send& x) {
            auto k = normalize(x.cont, env);
            return k == x.cont ? b : b_send(x.dst, x.expr, k);
          },
          [&](const bh::Recv& x) {
            auto k = normalize(x.cont, env);
            return k == x.cont ? b : b_recv(x.src, k);
          },
          [&](const bh::Cond& x) {
            auto t = normalize(x.then_branch, env);
            auto f = normalize(x.else_branch, env);
            auto k = normalize(x.cont, env);
            if (t == x.then_branch && f == x.else_branch && k == x.cont) return b;
            return b_cond(x.guard, t, f, k);
          },
          [&](const bh::Def& x) {
            BEnv inner = env;
            inner[x.var] = x.body;
            auto body = normalize(x.body, inner);
            inner[x.var] = body;
            auto k = normalize(x.cont, inner);
            std::set<RecVar> visited;
            if (inert(k, inner, visited)) return b_nil();
            if (body == x.body && k == x.cont) return b;
            return b_def(x.var, body, k);
          },
      },
      *b);
}

}  // namespace

bool is_inert(const Behaviour& b) {
  std::set<RecVar> visited;
  return inert(b, BEnv{}, visited);
}

Behaviour normalize_behaviour(const Behaviour& b) {
  if (is_inert(b)) return b_nil();
  return normalize(b, BEnv{});
}

MessageQueue MessageQueue::from_sequence(const std::vector<Message>& msgs) {
  MessageQueue q;
  for (const auto& m : msgs) q = enqueue(q, m);
  return q;
}

std::size_t MessageQueue::size() const {
  std::size_t n = 0;
  for (const auto& [_, lane] : lanes_) n += lane.size();
  return n;
}

std::size_t MessageQueue::lane_depth(const ProcessName& sender) const {
  auto it = lanes_.find(sender);
  return it == lanes_.end() ? 0 : it->second.size();
}

std::uint64_t MessageQueue::arrivals(const ProcessName& sender) const {
  auto it = arrivals_.find(sender);
  return it == arrivals_.end() ? 0 : it->second;
}

std::vector<Message> MessageQueue::to_sequence() const {
  std::vector<Message> out;
  for (const auto& [p, lane] : lanes_)
    for (const auto& v : lane) out.push_back(Message{p, v});
  return out;
}

MessageQueue enqueue(const MessageQueue& q, const Message& m) {
  MessageQueue next = q;
  next.lanes_[m.sender].push_back(m.payload);
  ++next.arrivals_[m.sender];
  return next;
}

std::optional<std::pair<Value, MessageQueue>> dequeue_from(const MessageQueue& q,
                                                           const ProcessName& p) {
  auto it = q.lanes_.find(p);
  if (it == q.lanes_.end()) return std::nullopt;
  MessageQueue next = q;
  auto& lane = next.lanes_.at(p);
  Value head = lane.front();
  lane.pop_front();
  if (lane.empty()) next.lanes_.erase(p);
  return std::make_pair(head, std::move(next));
}

const Process& Network::at(const ProcessName& p) const {
  auto it = procs_.find(p);
  if (it == procs_.end()) throw UnknownProcess(p);
  return it->second;
}

bool Network::add(const ProcessName& p, Process proc) {
  return procs_.emplace(p, std::move(proc)).second;
}

bool Network::all_queues_empty() const {
  for (const auto& [_, proc] : procs_)
    if (!proc.queue.empty()) return false;
  return true;
}

bool same(const Network& a, const Network& b) {
  if (a.size() != b.size()) return false;
  auto it = b.processes().begin();
  for (const auto& [p, proc] : a.processes()) {
    if (it->first != p) return false;
    const Process& other = it->second;
    if (!(proc.state == other.state) || !(proc.queue == other.queue) ||
        !same(proc.behaviour, other.behaviour))
      return false;
    ++it;
  }
  return true;
}

}  // namespace chor

namespace chor {

Behaviour substitute_call(const Behaviour& b, const RecVar& var, const Behaviour& body) {
  return std::visit(
      overloaded{
          [&](const bh::Nil&) { return b; },
          [&](const bh::Call& x) { return x.var == var ? body : b; },
          [&](const bh::Send& x) { return b_send(x.dst, x.expr, substitute_call(x.cont, var, body)); },
          [&](const bh::Recv& x) { return b_recv(x.src, substitute_call(x.cont, var, body)); },
          [&](const bh::Cond& x) {
            return b_cond(x.guard, substitute_call(x.then_branch, var, body),
                          substitute_call(x.else_branch, var, body), substitute_call(x.cont, var, body));
          },
          [&](const bh::Def& x) {
            if (x.var == var) return b;
            return b_def(x.var, substitute_call(x.body, var, body), substitute_call(x.cont, var, body));
          },
      },
      *b);
}

std::vector<Behaviour> unfold_once(const Behaviour& b) {
  std::vector<Behaviour> out;
  std::visit(overloaded{
                 [&](const bh::Nil&) {},
                 [&](const bh::Call&) {},
                 [&](const bh::Send& x) {
                   for (auto& v : unfold_once(x.cont)) out.push_back(b_send(x.dst, x.expr, v));
                 },
                 [&](const bh::Recv& x) {
                   for (auto& v : unfold_once(x.cont)) out.push_back(b_recv(x.src, v));
                 },
                 [&](const bh::Cond& x) {
                   for (auto& v : unfold_once(x.then_branch))
                     out.push_back(b_cond(x.guard, v, x.else_branch, x.cont));
                   for (auto& v : unfold_once(x.else_branch))
                     out.push_back(b_cond(x.guard, x.then_branch, v, x.cont));
                   for (auto& v : unfold_once(x.cont))
                     out.push_back(b_cond(x.guard, x.then_branch, x.else_branch, v));
                 },
                 [&](const bh::Def& x) {
                   Behaviour k = substitute_call(x.cont, x.var, x.body);
                   if (!same(k, x.cont)) out.push_back(b_def(x.var, x.body, k));
                   for (auto& v : unfold_once(x.cont)) out.push_back(b_def(x.var, x.body, v));
                   for (auto& v : unfold_once(x.body)) out.push_back(b_def(x.var, v, x.cont));
                 },
             },
             *b);
  return out;
}

}  // namespace chor
