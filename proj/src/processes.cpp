#include "chor/processes.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using Frame = std::pair<RecVar, Behaviour>;

// A behaviour with its head action on top and the definitions it runs under.
struct Exposed {
  std::vector<Frame> frames;
  Behaviour head;  // Send, Recv, Cond or Nil; null when stuck on a call
};

Exposed expose(const Behaviour& b) {
  Exposed e;
  std::set<RecVar> unfolded;
  Behaviour cur = b;
  for (;;) {
    if (const auto* d = std::get_if<bh::Def>(cur.get())) {
      e.frames.emplace_back(d->var, d->body);
      cur = d->cont;
      continue;
    }
    if (const auto* c = std::get_if<bh::Call>(cur.get())) {
      auto it = std::find_if(e.frames.rbegin(), e.frames.rend(),
                             [&](const Frame& f) { return f.first == c->var; });
      if (it == e.frames.rend() || !unfolded.insert(c->var).second) return e;
      cur = it->second;
      continue;
    }
    e.head = cur;
    return e;
  }
}

Behaviour rewrap(const std::vector<Frame>& frames, Behaviour k) {
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) k = b_def(it->first, it->second, k);
  return k;
}

Behaviour cont_after(const Exposed& e) {
  return std::visit(overloaded{
                        [&](const bh::Send& x) { return rewrap(e.frames, x.cont); },
                        [&](const bh::Recv& x) { return rewrap(e.frames, x.cont); },
                        [&](const auto&) { return e.head; },
                    },
                    *e.head);
}

StepLabel label(Rule rule, std::vector<ProcessName> subjects, std::optional<Value> v) {
  StepLabel l;
  l.rule = rule;
  l.subjects = std::move(subjects);
  l.value = std::move(v);
  return l;
}

void conditional_steps(const Network& n, const ProcessName& p, const Exposed& e,
                       std::vector<NetTransition>& out) {
  const auto* c = std::get_if<bh::Cond>(e.head.get());
  if (!c) return;
  const Process& proc = n.at(p);
  Value g = eval(c->guard, proc.state);
  if (!g.is_bool())
    throw GuardNotBoolean("guard of " + p.str() + " evaluated to " + g.to_string());
  bool taken = g.as_bool();
  Behaviour branch = sequence(taken ? c->then_branch : c->else_branch, c->cont);
  Network m = n;
  m.set(p, {proc.state, proc.queue, rewrap(e.frames, branch)});
  out.push_back({label(taken ? Rule::Then : Rule::Else, {p}, std::nullopt), normalize_network(m)});
}

std::map<ProcessName, Exposed> heads(const Network& n) {
  std::map<ProcessName, Exposed> out;
  for (const auto& [p, proc] : n.processes()) {
    Exposed e = expose(proc.behaviour);
    if (e.head) out.emplace(p, std::move(e));
  }
  return out;
}

}  // namespace

std::vector<NetTransition> enabled_sp(const Network& n) {
  if (!n.all_queues_empty()) throw NonEmptyQueue("synchronous step on a network with messages in transit");
  std::vector<NetTransition> out;
  auto hs = heads(n);
  for (const auto& [p, e] : hs) {
    conditional_steps(n, p, e, out);
    const auto* s = std::get_if<bh::Send>(e.head.get());
    if (!s) continue;
    auto it = hs.find(s->dst);
    if (it == hs.end()) continue;
    const auto* r = std::get_if<bh::Recv>(it->second.head.get());
    if (!r || r->src != p) continue;
    const Process& sender = n.at(p);
    const Process& receiver = n.at(s->dst);
    Value v = eval(s->expr, sender.state);
    Network m = n;
    m.set(p, {sender.state, sender.queue, cont_after(e)});
    m.set(s->dst, {v, receiver.queue, cont_after(it->second)});
    out.push_back({label(Rule::Com, {p, s->dst}, v), normalize_network(m)});
  }
  return out;
}

std::vector<NetTransition> enabled_asp(const Network& n) {
  std::vector<NetTransition> out;
  auto hs = heads(n);
  for (const auto& [p, e] : hs) {
    conditional_steps(n, p, e, out);
    const Process& proc = n.at(p);
    if (const auto* s = std::get_if<bh::Send>(e.head.get())) {
      if (!n.contains(s->dst)) continue;
      Value v = eval(s->expr, proc.state);
      Network m = n;
      m.set(p, {proc.state, proc.queue, cont_after(e)});
      const Process& dst = m.at(s->dst);
      m.set(s->dst, {dst.state, enqueue(dst.queue, {p, v}), dst.behaviour});
      out.push_back({label(Rule::ComS, {p, s->dst}, v), normalize_network(m)});
    } else if (const auto* r = std::get_if<bh::Recv>(e.head.get())) {
      auto d = dequeue_from(proc.queue, r->src);
      if (!d) continue;
      Network m = n;
      m.set(p, {d->first, d->second, cont_after(e)});
      out.push_back({label(Rule::ComR, {r->src, p}, d->first), normalize_network(m)});
    }
  }
  return out;
}

std::vector<NetTransition> enabled_net(const Network& n, Mode mode) {
  return mode == Mode::Sync ? enabled_sp(n) : enabled_asp(n);
}

Network normalize_network(const Network& n) {
  Network out;
  for (const auto& [p, proc] : n.processes()) {
    Behaviour b = normalize_behaviour(proc.behaviour);
    if (is_nil(b) && proc.queue.empty()) continue;
    out.set(p, {proc.state, proc.queue, b});
  }
  return out;
}

Network lift_to_async(const Network& n) {
  Network out;
  for (const auto& [p, proc] : n.processes()) out.set(p, {proc.state, MessageQueue{}, proc.behaviour});
  return out;
}

const char* status_name(NetStatus s) {
  switch (s) {
    case NetStatus::Terminated: return "terminated";
    case NetStatus::OrphanedMessages: return "orphaned-messages";
    case NetStatus::Deadlocked: return "deadlocked";
    case NetStatus::Running: return "running";
  }
  return "?";
}

NetStatus classify(const Network& n, Mode mode) {
  if (!enabled_net(n, mode).empty()) return NetStatus::Running;
  Network m = normalize_network(n);
  if (m.empty()) return NetStatus::Terminated;
  bool all_done = std::all_of(m.processes().begin(), m.processes().end(),
                              [](const auto& kv) { return is_nil(kv.second.behaviour); });
  return all_done ? NetStatus::OrphanedMessages : NetStatus::Deadlocked;
}

}  // namespace chor
