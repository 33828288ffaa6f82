#include "chor/epp.hpp"

#include "chor/async.hpp"
#include "chor/syntax.hpp"

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string where(const Path& path) {
  std::string s;
  for (Step st : path) {
    switch (st) {
      case Step::Cont: s += '.'; break;
      case Step::Then: s += 't'; break;
      case Step::Else: s += 'e'; break;
      case Step::Unfold: s += 'u'; break;
    }
  }
  return s.empty() ? "top" : s;
}

Behaviour project(const Chor& c, const ProcessName& r, Path& path) {
  auto next = [&](const Chor& k) {
    path.push_back(Step::Cont);
    Behaviour b = project(k, r, path);
    path.pop_back();
    return b;
  };
  return std::visit(
      overloaded{
          [&](const ch::Nil&) { return b_nil(); },
          [&](const ch::Call& x) { return b_call(x.var); },
          [&](const ch::Com& x) {
            if (x.src == r) return b_send(x.dst, x.expr, next(x.cont));
            if (x.dst == r) return b_recv(x.src, next(x.cont));
            return next(x.cont);
          },
          [&](const ch::Cond& x) {
            path.push_back(Step::Then);
            Behaviour t = project(x.then_branch, r, path);
            path.back() = Step::Else;
            Behaviour e = project(x.else_branch, r, path);
            path.pop_back();
            if (x.decider == r) return b_cond(x.guard, t, e, b_nil());
            if (!same(normalize_behaviour(t), normalize_behaviour(e)))
              throw NotProjectable("conditional '" + render_head(*c) + "' at " + where(path) +
                                   ": branches project differently for " + r.str() + ": " +
                                   render(t) + " vs " + render(e));
            return t;
          },
          [&](const ch::Def& x) {
            path.push_back(Step::Unfold);
            Behaviour body = project(x.body, r, path);
            path.pop_back();
            return b_def(x.var, body, next(x.cont));
          },
          [&](const ch::RtRecv& x) {
            if (std::holds_alternative<Tag>(x.payload))
              throw IllFormed("receive '" + render_head(*c) + "' still waits for its message");
            if (x.dst == r) return b_recv(x.src, next(x.cont));
            return next(x.cont);
          },
          [&](const ch::RtSend&) -> Behaviour {
            throw IllFormed("send '" + render_head(*c) + "' in transit cannot be projected");
          },
          [&](const ch::Hole&) -> Behaviour { throw IllFormed("cannot project a context"); },
      },
      *c);
}

}  // namespace

Behaviour project_behaviour(const Chor& c, const ProcessName& r) {
  Path path;
  return project(c, r, path);
}

std::vector<Message> project_queue(const Chor& c, const ProcessName& r) {
  return std::visit(
      overloaded{
          [&](const ch::RtRecv& x) {
            auto rest = project_queue(x.cont, r);
            const auto* v = std::get_if<Value>(&x.payload);
            if (x.dst == r && v) rest.insert(rest.begin(), Message{x.src, *v});
            return rest;
          },
          [&](const ch::Cond& x) {
            auto t = project_queue(x.then_branch, r);
            if (t != project_queue(x.else_branch, r))
              throw NotProjectable("branches of '" + render_head(*c) +
                                   "' disagree on messages in transit to " + r.str());
            return t;
          },
          [&](const ch::Com& x) { return project_queue(x.cont, r); },
          [&](const ch::RtSend& x) { return project_queue(x.cont, r); },
          [&](const ch::Def& x) { return project_queue(x.cont, r); },
          [&](const ch::Hole& x) { return project_queue(x.cont, r); },
          [&](const auto&) { return std::vector<Message>{}; },
      },
      *c);
}

Network epp_sync(const Chor& c, const GlobalState& sigma) {
  if (has_runtime_terms(c)) throw IllFormed("synchronous projection of a runtime choreography");
  Network n;
  for (const auto& p : pn(c)) n.add(p, {sigma.at(p), MessageQueue{}, project_behaviour(c, p)});
  return n;
}

Network epp_async(const Chor& c, const GlobalState& sigma) {
  WellFormedness w = well_formed(c);
  if (!w.ok) throw IllFormed(w.diagnosis);
  Network n;
  // The folded form projects like the canonical one (receives only move past
  // actions of other processes) but keeps definitions where they are.
  for (const auto& p : pn(w.folded))
    n.add(p, {sigma.at(p), MessageQueue::from_sequence(project_queue(w.folded, p)),
              project_behaviour(w.folded, p)});
  return n;
}

bool projectable(const Chor& c) {
  try {
    for (const auto& p : pn(c)) project_behaviour(c, p);
    return true;
  } catch (const NotProjectable&) {
    return false;
  }
}

}  // namespace chor
