#include "chor/choreography.hpp"

#include <map>
#include <set>

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Chor make(ChorNode n) { return std::make_shared<const ChorNode>(std::move(n)); }

const Chor& shared_nil() {
  static const Chor n = make(ch::Nil{});
  return n;
}

}  // namespace

Chor nil() { return shared_nil(); }
Chor com(ProcessName src, Expr e, ProcessName dst, Chor cont) {
  return make(ch::Com{std::move(src), std::move(e), std::move(dst), std::move(cont)});
}
Chor cond(ProcessName decider, Expr guard, Chor then_branch, Chor else_branch) {
  return make(
      ch::Cond{std::move(decider), std::move(guard), std::move(then_branch), std::move(else_branch)});
}
Chor def(RecVar var, Chor body, Chor cont) {
  return make(ch::Def{std::move(var), std::move(body), std::move(cont)});
}
Chor call(RecVar var) { return make(ch::Call{std::move(var)}); }
Chor rt_send(ProcessName src, Expr e, Tag tag, Chor cont) {
  return make(ch::RtSend{std::move(src), std::move(e), tag, std::move(cont)});
}
Chor rt_recv(ProcessName src, Payload payload, ProcessName dst, Chor cont) {
  return make(ch::RtRecv{std::move(src), std::move(payload), std::move(dst), std::move(cont)});
}
Chor hole(Chor cont) { return make(ch::Hole{std::move(cont)}); }

bool same(const Chor& a, const Chor& b) {
  if (a == b) return true;
  if (a->index() != b->index()) return false;
  return std::visit(
      overloaded{
          [&](const ch::Nil&) { return true; },
          [&](const ch::Com& x) {
            const auto& y = std::get<ch::Com>(*b);
            return x.src == y.src && x.dst == y.dst && x.expr == y.expr && same(x.cont, y.cont);
          },
          [&](const ch::Cond& x) {
            const auto& y = std::get<ch::Cond>(*b);
            return x.decider == y.decider && x.guard == y.guard &&
                   same(x.then_branch, y.then_branch) && same(x.else_branch, y.else_branch);
          },
          [&](const ch::Def& x) {
            const auto& y = std::get<ch::Def>(*b);
            return x.var == y.var && same(x.body, y.body) && same(x.cont, y.cont);
          },
          [&](const ch::Call& x) { return x.var == std::get<ch::Call>(*b).var; },
          [&](const ch::RtSend& x) {
            const auto& y = std::get<ch::RtSend>(*b);
            return x.src == y.src && x.tag == y.tag && x.expr == y.expr && same(x.cont, y.cont);
          },
          [&](const ch::RtRecv& x) {
            const auto& y = std::get<ch::RtRecv>(*b);
            return x.src == y.src && x.dst == y.dst && x.payload == y.payload &&
                   same(x.cont, y.cont);
          },
          [&](const ch::Hole& x) { return same(x.cont, std::get<ch::Hole>(*b).cont); },
      },
      *a);
}

ProcessSet head_names(const ChorNode& n) {
  return std::visit(overloaded{
                        [](const ch::Com& x) { return ProcessSet{x.src, x.dst}; },
                        [](const ch::Cond& x) { return ProcessSet{x.decider}; },
                        [](const ch::RtSend& x) { return ProcessSet{x.src}; },
                        [](const ch::RtRecv& x) { return ProcessSet{x.dst}; },
                        [](const auto&) { return ProcessSet{}; },
                    },
                    n);
}

namespace {

void collect_names(const Chor& c, ProcessSet& out) {
  const ChorNode& n = *c;
  for (const auto& p : head_names(n)) out.insert(p);
  std::visit(overloaded{
                 [&](const ch::Cond& x) {
                   collect_names(x.then_branch, out);
                   collect_names(x.else_branch, out);
                 },
                 [&](const ch::Def& x) {
                   collect_names(x.body, out);
                   collect_names(x.cont, out);
                 },
                 [&](const ch::Nil&) {},
                 [&](const ch::Call&) {},
                 [&](const auto& x) { collect_names(x.cont, out); },
             },
             n);
}

}  // namespace

ProcessSet pn(const Chor& c) {
  ProcessSet out;
  collect_names(c, out);
  return out;
}

bool is_nil(const Chor& c) { return std::holds_alternative<ch::Nil>(*c); }

bool has_runtime_terms(const Chor& c) {
  return std::visit(overloaded{
                        [](const ch::Nil&) { return false; },
                        [](const ch::Call&) { return false; },
                        [](const ch::RtSend&) { return true; },
                        [](const ch::RtRecv&) { return true; },
                        [](const ch::Cond& x) {
                          return has_runtime_terms(x.then_branch) ||
                                 has_runtime_terms(x.else_branch);
                        },
                        [](const ch::Def& x) {
                          return has_runtime_terms(x.body) || has_runtime_terms(x.cont);
                        },
                        [](const auto& x) { return has_runtime_terms(x.cont); },
                    },
                    *c);
}

std::optional<Tag> max_tag(const Chor& c) {
  auto join = [](std::optional<Tag> a, std::optional<Tag> b) -> std::optional<Tag> {
    if (!a) return b;
    if (!b) return a;
    return *a < *b ? b : a;
  };
  return std::visit(overloaded{
                        [](const ch::Nil&) -> std::optional<Tag> { return std::nullopt; },
                        [](const ch::Call&) -> std::optional<Tag> { return std::nullopt; },
                        [&](const ch::RtSend& x) { return join(x.tag, max_tag(x.cont)); },
                        [&](const ch::RtRecv& x) {
                          std::optional<Tag> own;
                          if (auto* t = std::get_if<Tag>(&x.payload)) own = *t;
                          return join(own, max_tag(x.cont));
                        },
                        [&](const ch::Cond& x) {
                          return join(max_tag(x.then_branch), max_tag(x.else_branch));
                        },
                        [&](const ch::Def& x) { return join(max_tag(x.body), max_tag(x.cont)); },
                        [&](const ch::Com& x) { return max_tag(x.cont); },
                        [&](const ch::Hole& x) { return max_tag(x.cont); },
                    },
                    *c);
}

std::size_t action_count(const Chor& c) {
  return std::visit(overloaded{
                        [](const ch::Nil&) -> std::size_t { return 0; },
                        [](const ch::Call&) -> std::size_t { return 0; },
                        [](const ch::Hole& x) { return action_count(x.cont); },
                        [](const ch::Cond& x) {
                          return 1 + action_count(x.then_branch) + action_count(x.else_branch);
                        },
                        [](const ch::Def& x) { return action_count(x.body) + action_count(x.cont); },
                        [](const auto& x) { return 1 + action_count(x.cont); },
                    },
                    *c);
}

Chor with_cont(const Chor& c, Chor k) {
  return std::visit(overloaded{
                        [&](const ch::Com& x) { return com(x.src, x.expr, x.dst, std::move(k)); },
                        [&](const ch::RtSend& x) { return rt_send(x.src, x.expr, x.tag, std::move(k)); },
                        [&](const ch::RtRecv& x) {
                          return rt_recv(x.src, x.payload, x.dst, std::move(k));
                        },
                        [&](const ch::Hole&) { return hole(std::move(k)); },
                        [&](const ch::Def& x) { return def(x.var, x.body, std::move(k)); },
                        [&](const auto&) { return c; },
                    },
                    *c);
}

Chor sequence(const Chor& head, const Chor& tail) {
  if (is_nil(tail)) return head;
  return std::visit(overloaded{
                        [&](const ch::Nil&) { return tail; },
                        [&](const ch::Call&) { return head; },
                        [&](const ch::Cond& x) {
                          return cond(x.decider, x.guard, sequence(x.then_branch, tail),
                                      sequence(x.else_branch, tail));
                        },
                        [&](const ch::Def& x) {
                          return def(x.var, sequence(x.body, tail), sequence(x.cont, tail));
                        },
                        [&](const auto& x) { return with_cont(head, sequence(x.cont, tail)); },
                    },
                    *head);
}

Chor instantiate_tag(const Chor& c, Tag t, Value v) {
  return std::visit(
      overloaded{
          [&](const ch::Nil&) { return c; },
          [&](const ch::Call&) { return c; },
          [&](const ch::Cond& x) {
            return cond(x.decider, x.guard, instantiate_tag(x.then_branch, t, v),
                        instantiate_tag(x.else_branch, t, v));
          },
          [&](const ch::Def& x) {
            return def(x.var, instantiate_tag(x.body, t, v), instantiate_tag(x.cont, t, v));
          },
          [&](const ch::RtRecv& x) {
            const auto* tag = std::get_if<Tag>(&x.payload);
            Payload pl = (tag && *tag == t) ? Payload{v} : x.payload;
            return rt_recv(x.src, pl, x.dst, instantiate_tag(x.cont, t, v));
          },
          [&](const auto& x) { return with_cont(c, instantiate_tag(x.cont, t, v)); },
      },
      *c);
}

Chor substitute_call(const Chor& c, const RecVar& var, const Chor& body) {
  return std::visit(
      overloaded{
          [&](const ch::Nil&) { return c; },
          [&](const ch::Call& x) { return x.var == var ? body : c; },
          [&](const ch::Cond& x) {
            return cond(x.decider, x.guard, substitute_call(x.then_branch, var, body),
                        substitute_call(x.else_branch, var, body));
          },
          [&](const ch::Def& x) {
            if (x.var == var) return c;
            return def(x.var, substitute_call(x.body, var, body), substitute_call(x.cont, var, body));
          },
          [&](const auto& x) { return with_cont(c, substitute_call(x.cont, var, body)); },
      },
      *c);
}

namespace {

using Env = std::map<RecVar, Chor>;

bool dead(const Chor& c, const Env& env, std::set<RecVar>& visited) {
  return std::visit(overloaded{
                        [&](const ch::Nil&) { return true; },
                        [&](const ch::Call& x) {
                          if (!visited.insert(x.var).second) return true;
                          auto it = env.find(x.var);
                          return it == env.end() || dead(it->second, env, visited);
                        },
                        [&](const ch::Def& x) {
                          Env inner = env;
                          inner[x.var] = x.body;
                          return dead(x.cont, inner, visited);
                        },
                        [&](const auto&) { return false; },
                    },
                    *c);
}

Chor gc(const Chor& c, const Env& env) {
  return std::visit(overloaded{
                        [&](const ch::Nil&) { return c; },
                        [&](const ch::Call&) { return c; },
                        [&](const ch::Cond& x) {
                          auto t = gc(x.then_branch, env);
                          auto f = gc(x.else_branch, env);
                          if (t == x.then_branch && f == x.else_branch) return c;
                          return cond(x.decider, x.guard, t, f);
                        },
                        [&](const ch::Def& x) {
                          Env inner = env;
                          inner[x.var] = x.body;
                          auto b = gc(x.body, inner);
                          inner[x.var] = b;
                          auto k = gc(x.cont, inner);
                          std::set<RecVar> visited;
                          if (dead(k, inner, visited)) return nil();
                          if (b == x.body && k == x.cont) return c;
                          return def(x.var, b, k);
                        },
                        [&](const auto& x) {
                          auto k = gc(x.cont, env);
                          return k == x.cont ? c : with_cont(c, k);
                        },
                    },
                    *c);
}

}  // namespace

Chor collect_garbage(const Chor& c) { return gc(c, Env{}); }

}  // namespace chor
