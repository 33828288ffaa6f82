#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "chor/syntax.hpp"

namespace oracle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

char kind_of(const Value& v) { return v.is_int() ? 'i' : v.is_bool() ? 'b' : 'e'; }

}  // namespace

Value table_apply(BinaryOp op, const Value& a, const Value& b) {
  struct Row {
    BinaryOp op;
    char lhs, rhs;
  };
  // The only well-typed combinations; everything else evaluates to err.
  static const Row typed[] = {
      {BinaryOp::Add, 'i', 'i'}, {BinaryOp::Sub, 'i', 'i'}, {BinaryOp::Mul, 'i', 'i'},
      {BinaryOp::Lt, 'i', 'i'},  {BinaryOp::Eq, 'i', 'i'},  {BinaryOp::Eq, 'b', 'b'},
      {BinaryOp::And, 'b', 'b'}, {BinaryOp::Or, 'b', 'b'},
  };
  bool ok = std::any_of(std::begin(typed), std::end(typed), [&](const Row& r) {
    return r.op == op && r.lhs == kind_of(a) && r.rhs == kind_of(b);
  });
  if (!ok) return Value::error();
  switch (op) {
    case BinaryOp::Add: return Value::integer(a.as_int() + b.as_int());
    case BinaryOp::Sub: return Value::integer(a.as_int() - b.as_int());
    case BinaryOp::Mul: return Value::integer(a.as_int() * b.as_int());
    case BinaryOp::Lt: return Value::boolean(a.as_int() < b.as_int());
    case BinaryOp::Eq:
      return Value::boolean(a.is_int() ? a.as_int() == b.as_int() : a.as_bool() == b.as_bool());
    case BinaryOp::And: return Value::boolean(a.as_bool() && b.as_bool());
    case BinaryOp::Or: return Value::boolean(a.as_bool() || b.as_bool());
  }
  return Value::error();
}

const std::vector<BinaryOp>& all_ops() {
  static const std::vector<BinaryOp> ops{BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Eq,
                                         BinaryOp::Lt,  BinaryOp::And, BinaryOp::Or};
  return ops;
}

const std::vector<Value>& sample_values() {
  static const std::vector<Value> vs{Value::integer(0),     Value::integer(3),     Value::integer(-2),
                                     Value::boolean(true), Value::boolean(false), Value::error()};
  return vs;
}

std::string seq_key(const Seq& s) {
  std::string k;
  for (const auto& m : s) k += m.sender.str() + ":" + m.payload.to_string() + " ";
  return k;
}

std::set<std::string> congruence_class(const Seq& s) {
  std::set<std::string> seen{seq_key(s)};
  std::deque<Seq> todo{s};
  while (!todo.empty()) {
    Seq cur = todo.front();
    todo.pop_front();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i].sender == cur[i + 1].sender) continue;
      Seq next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(seq_key(next)).second) todo.push_back(next);
    }
  }
  return seen;
}

std::vector<Seq> all_sequences(const std::vector<ProcessName>& senders, const std::vector<Value>& values,
                               std::size_t n) {
  std::vector<Seq> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Seq> longer;
    for (const auto& s : out)
      for (const auto& p : senders)
        for (const auto& v : values) {
          Seq t = s;
          t.push_back({p, v});
          longer.push_back(t);
        }
    out = std::move(longer);
  }
  return out;
}

std::optional<std::pair<Value, Seq>> seq_dequeue(const Seq& s, const ProcessName& p) {
  // Try every arrangement in the class; all that start with p must agree.
  std::optional<std::pair<Value, Seq>> found;
  std::deque<Seq> todo{s};
  std::set<std::string> seen{seq_key(s)};
  while (!todo.empty()) {
    Seq cur = todo.front();
    todo.pop_front();
    if (!cur.empty() && cur.front().sender == p) {
      Seq rest(cur.begin() + 1, cur.end());
      if (!found) {
        found = std::make_pair(cur.front().payload, rest);
      } else if (!(found->first == cur.front().payload) || !congruence_class(rest).count(seq_key(found->second))) {
        throw std::logic_error("queue oracle: receive is not determined");
      }
    }
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i].sender == cur[i + 1].sender) continue;
      Seq next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(seq_key(next)).second) todo.push_back(next);
    }
  }
  return found;
}

namespace {

// pn of a single interaction, read directly off the node.
std::optional<ProcessSet> eta_names(const Chor& c) {
  return std::visit(overloaded{
                        [](const ch::Com& x) -> std::optional<ProcessSet> { return ProcessSet{x.src, x.dst}; },
                        [](const ch::RtSend& x) -> std::optional<ProcessSet> { return ProcessSet{x.src}; },
                        [](const ch::RtRecv& x) -> std::optional<ProcessSet> { return ProcessSet{x.dst}; },
                        [](const auto&) -> std::optional<ProcessSet> { return std::nullopt; },
                    },
                    *c);
}

Chor eta_cont(const Chor& c) {
  return std::visit(overloaded{
                        [](const ch::Com& x) { return x.cont; },
                        [](const ch::RtSend& x) { return x.cont; },
                        [](const ch::RtRecv& x) { return x.cont; },
                        [&](const auto&) { return c; },
                    },
                    *c);
}

bool disjoint(const ProcessSet& a, const ProcessSet& b) {
  for (const auto& p : a)
    if (b.count(p)) return false;
  return true;
}

// The same action, ignoring what follows it.
bool same_head(const Chor& a, const Chor& b) { return same(with_cont(a, nil()), with_cont(b, nil())); }

// Rewrites applying at the root.
void root_rewrites(const Chor& c, std::vector<Chor>& out) {
  if (auto n = eta_names(c)) {
    Chor k = eta_cont(c);
    // Eta-Eta
    if (auto m = eta_names(k); m && disjoint(*n, *m)) out.push_back(with_cont(k, with_cont(c, eta_cont(k))));
    // Eta-Cond, distributing the action into both branches.
    if (const auto* x = std::get_if<ch::Cond>(k.get()); x && !n->count(x->decider))
      out.push_back(cond(x->decider, x->guard, with_cont(c, x->then_branch), with_cont(c, x->else_branch)));
    return;
  }
  const auto* x = std::get_if<ch::Cond>(c.get());
  if (!x) return;
  // Eta-Cond, factoring a common first action out of both branches.
  auto n = eta_names(x->then_branch);
  if (n && eta_names(x->else_branch) && same_head(x->then_branch, x->else_branch) && !n->count(x->decider))
    out.push_back(with_cont(x->then_branch, cond(x->decider, x->guard, eta_cont(x->then_branch),
                                                 eta_cont(x->else_branch))));
  // Cond-Cond
  const auto* a = std::get_if<ch::Cond>(x->then_branch.get());
  const auto* b = std::get_if<ch::Cond>(x->else_branch.get());
  if (a && b && a->decider == b->decider && a->guard == b->guard && a->decider != x->decider)
    out.push_back(cond(a->decider, a->guard, cond(x->decider, x->guard, a->then_branch, b->then_branch),
                       cond(x->decider, x->guard, a->else_branch, b->else_branch)));
}

void rewrites(const Chor& c, std::vector<Chor>& out) {
  root_rewrites(c, out);
  if (eta_names(c)) {
    std::vector<Chor> inner;
    rewrites(eta_cont(c), inner);
    for (auto& k : inner) out.push_back(with_cont(c, k));
  } else if (const auto* x = std::get_if<ch::Cond>(c.get())) {
    std::vector<Chor> inner;
    rewrites(x->then_branch, inner);
    for (auto& k : inner) out.push_back(cond(x->decider, x->guard, k, x->else_branch));
    inner.clear();
    rewrites(x->else_branch, inner);
    for (auto& k : inner) out.push_back(cond(x->decider, x->guard, x->then_branch, k));
  }
}

// Smallest rendering in the closure: a canonical name for the class.
std::string class_key(const Chor& c) {
  static thread_local std::unordered_map<std::string, std::string> memo;
  std::string r = render(c);
  if (auto it = memo.find(r); it != memo.end()) return it->second;
  std::string best = r;
  for (const auto& t : swap_closure(c)) best = std::min(best, render(t));
  memo.emplace(r, best);
  return best;
}

std::string target_key(const Configuration& cfg) { return class_key(cfg.chor) + " " + cfg.state.to_string(); }

std::string sig(const char* rule, const ProcessName& a, const ProcessName* b, const Value* v) {
  std::string s = std::string(rule) + " " + a.str();
  if (b) s += "->" + b->str();
  if (v) s += " v=" + v->to_string();
  return s;
}

// First occurrence of `key` on every path becomes `p.e ~> [x]; q <~ (p, x)`.
Chor unfold_first(const Chor& c, const Chor& key, Tag x) {
  if (std::holds_alternative<ch::Com>(*c) && same_head(c, key)) {
    const auto& m = std::get<ch::Com>(*c);
    return rt_send(m.src, m.expr, x, rt_recv(m.src, x, m.dst, m.cont));
  }
  if (eta_names(c)) return with_cont(c, unfold_first(eta_cont(c), key, x));
  if (const auto* k = std::get_if<ch::Cond>(c.get()))
    return cond(k->decider, k->guard, unfold_first(k->then_branch, key, x), unfold_first(k->else_branch, key, x));
  return c;
}

void collect_coms(const Chor& c, std::vector<Chor>& out) {
  if (std::holds_alternative<ch::Com>(*c)) {
    Chor head = with_cont(c, nil());
    if (std::none_of(out.begin(), out.end(), [&](const Chor& h) { return same(h, head); })) out.push_back(head);
  }
  if (eta_names(c)) collect_coms(eta_cont(c), out);
  if (const auto* k = std::get_if<ch::Cond>(c.get())) {
    collect_coms(k->then_branch, out);
    collect_coms(k->else_branch, out);
  }
}

Tag fresh_tag(const Chor& c) {
  std::uint64_t top = 0;
  std::function<void(const Chor&)> scan = [&](const Chor& n) {
    if (const auto* s = std::get_if<ch::RtSend>(n.get())) top = std::max(top, s->tag.id + 1);
    if (const auto* r = std::get_if<ch::RtRecv>(n.get()))
      if (const auto* t = std::get_if<Tag>(&r->payload)) top = std::max(top, t->id + 1);
    if (eta_names(n)) scan(eta_cont(n));
    if (const auto* k = std::get_if<ch::Cond>(n.get())) {
      scan(k->then_branch);
      scan(k->else_branch);
    }
  };
  scan(c);
  return Tag{top};
}

Chor substitute_tag(const Chor& c, Tag t, const Value& v) {
  if (const auto* r = std::get_if<ch::RtRecv>(c.get())) {
    const auto* x = std::get_if<Tag>(&r->payload);
    Payload p = x && *x == t ? Payload{v} : r->payload;
    return rt_recv(r->src, p, r->dst, substitute_tag(r->cont, t, v));
  }
  if (eta_names(c)) return with_cont(c, substitute_tag(eta_cont(c), t, v));
  if (const auto* k = std::get_if<ch::Cond>(c.get()))
    return cond(k->decider, k->guard, substitute_tag(k->then_branch, t, v), substitute_tag(k->else_branch, t, v));
  return c;
}

// Steps read off the head of one term.
void head_steps(const Chor& t, const GlobalState& s, Mode mode, StepSet& out) {
  std::visit(overloaded{
                 [&](const ch::Com& x) {
                   if (mode != Mode::Sync) return;
                   Value v = eval(x.expr, s.at(x.src));
                   out.insert({sig("Com", x.src, &x.dst, &v), target_key({x.cont, s.updated(x.dst, v)})});
                 },
                 [&](const ch::RtSend& x) {
                   Value v = eval(x.expr, s.at(x.src));
                   // The receiver is named by the matching receive.
                   std::optional<ProcessName> dst;
                   std::function<void(const Chor&)> find = [&](const Chor& n) {
                     if (const auto* r = std::get_if<ch::RtRecv>(n.get()))
                       if (const auto* g = std::get_if<Tag>(&r->payload); g && *g == x.tag) dst = r->dst;
                     if (eta_names(n)) find(eta_cont(n));
                     if (const auto* k = std::get_if<ch::Cond>(n.get())) {
                       find(k->then_branch);
                       find(k->else_branch);
                     }
                   };
                   find(x.cont);
                   out.insert({sig("ComS", x.src, dst ? &*dst : nullptr, &v),
                               target_key({substitute_tag(x.cont, x.tag, v), s})});
                 },
                 [&](const ch::RtRecv& x) {
                   const auto* v = std::get_if<Value>(&x.payload);
                   if (!v) return;
                   out.insert({sig("ComR", x.src, &x.dst, v), target_key({x.cont, s.updated(x.dst, *v)})});
                 },
                 [&](const ch::Cond& x) {
                   Value g = eval(x.guard, s.at(x.decider));
                   if (!g.is_bool()) throw std::logic_error("rule oracle: guard is not boolean");
                   bool b = g.as_bool();
                   out.insert({sig(b ? "Then" : "Else", x.decider, nullptr, nullptr),
                               target_key({b ? x.then_branch : x.else_branch, s})});
                 },
                 [&](const auto&) {},
             },
             *t);
}

}  // namespace

std::vector<Chor> swap_closure(const Chor& c, std::size_t limit) {
  std::unordered_set<std::string> seen{render(c)};
  std::vector<Chor> out{c};
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<Chor> next;
    rewrites(out[i], next);
    for (auto& n : next) {
      if (!seen.insert(render(n)).second) continue;
      out.push_back(n);
      if (out.size() > limit) throw std::length_error("swap closure too large");
    }
  }
  return out;
}

StepSet rule_steps(const Configuration& cfg, Mode mode) {
  StepSet out;
  for (const auto& t : swap_closure(cfg.chor)) head_steps(t, cfg.state, mode, out);
  if (mode == Mode::Async) {
    // Unfolding a communication (once, with one fresh tag) exposes its send.
    std::vector<Chor> coms;
    collect_coms(cfg.chor, coms);
    Tag x = fresh_tag(cfg.chor);
    for (const auto& key : coms) {
      Chor u = unfold_first(cfg.chor, key, x);
      for (const auto& t : swap_closure(u)) {
        const auto* s = std::get_if<ch::RtSend>(t.get());
        if (s && s->tag == x) head_steps(t, cfg.state, mode, out);
      }
    }
  }
  return out;
}

StepSet engine_steps(const Configuration& cfg, Mode mode) {
  StepSet out;
  for (const auto& t : enabled(cfg, mode)) out.insert({t.label.signature(), target_key(t.target)});
  return out;
}

namespace {

struct Alphabet {
  std::vector<Chor> atoms;  // heads with a Nil continuation
  std::vector<std::pair<ProcessName, Expr>> guards;
};

void grow(const Alphabet& a, std::size_t actions, std::size_t conds, std::vector<Chor>& out) {
  out.push_back(nil());
  if (actions == 0) return;
  std::vector<Chor> rest;
  grow(a, actions - 1, conds, rest);
  for (const auto& atom : a.atoms)
    for (const auto& k : rest) out.push_back(with_cont(atom, k));
  if (conds == 0) return;
  // Split the remaining actions between the branches.
  for (std::size_t left = 0; left + 1 <= actions; ++left) {
    std::vector<Chor> ts, es;
    grow(a, left, conds - 1, ts);
    grow(a, actions - 1 - left, conds - 1, es);
    for (const auto& [d, g] : a.guards)
      for (const auto& t : ts)
        for (const auto& e : es) {
          Chor c = cond(d, g, t, e);
          if (action_count(c) <= actions) out.push_back(c);
        }
  }
}

}  // namespace

std::vector<Chor> small_choreographies(std::size_t max_actions, std::size_t max_conds, bool receives) {
  ProcessName p("p"), q("q"), r("r"), s("s");
  Alphabet a;
  a.atoms = {com(p, Expr::literal(Value::integer(1)), q, nil()), com(r, Expr::self(), s, nil()),
             com(q, Expr::self(), r, nil())};
  if (receives) {
    a.atoms.push_back(rt_recv(p, Value::integer(7), q, nil()));
    a.atoms.push_back(rt_recv(r, Value::integer(8), s, nil()));
  }
  Expr lt2 = Expr::binary(BinaryOp::Lt, Expr::self(), Expr::literal(Value::integer(2)));
  a.guards = {{p, lt2}, {r, lt2}};
  std::vector<Chor> out;
  grow(a, max_actions, max_conds, out);
  // Conditionals are counted by action_count, so the bound holds for all.
  std::unordered_set<std::string> seen;
  std::vector<Chor> unique;
  for (auto& c : out)
    if (action_count(c) <= max_actions && seen.insert(render(c)).second) unique.push_back(c);
  return unique;
}

GlobalState small_state() {
  return GlobalState({{ProcessName("p"), Value::integer(1)},
                      {ProcessName("q"), Value::integer(2)},
                      {ProcessName("r"), Value::integer(3)},
                      {ProcessName("s"), Value::integer(4)}});
}

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Expr random_expr(Rng& g, int depth) {
  if (depth <= 0 || g.below(3) == 0) {
    switch (g.below(4)) {
      case 0: return Expr::self();
      case 1: return Expr::literal(Value::boolean(g.below(2) == 1));
      default: return Expr::literal(Value::integer(static_cast<std::int64_t>(g.below(10))));
    }
  }
  if (g.below(6) == 0) return Expr::negate(random_expr(g, depth - 1));
  BinaryOp op = all_ops()[g.below(all_ops().size())];
  return Expr::binary(op, random_expr(g, depth - 1), random_expr(g, depth - 1));
}

namespace {

Chor random_body(Rng& g, int& budget, const std::vector<ProcessName>& procs, const RecVar* x) {
  if (budget <= 0) return x && g.below(2) ? call(*x) : nil();
  --budget;
  ProcessName a = procs[g.below(procs.size())];
  ProcessName b = procs[g.below(procs.size())];
  while (b == a) b = procs[g.below(procs.size())];
  if (g.below(4) == 0) {
    int left = budget / 2, right = budget - left;
    return cond(a, random_expr(g, 2), random_body(g, left, procs, x), random_body(g, right, procs, x));
  }
  return com(a, random_expr(g, 2), b, random_body(g, budget, procs, x));
}

}  // namespace

Chor random_chor(Rng& g, int budget, bool allow_def) {
  std::vector<ProcessName> procs{ProcessName("p"), ProcessName("q"), ProcessName("r"), ProcessName("s")};
  if (allow_def && g.below(2)) {
    RecVar x("X");
    int inner = budget / 2, outer = budget - inner;
    Chor body = random_body(g, inner, procs, &x);
    Chor cont = random_body(g, outer, procs, nullptr);
    return def(x, body, sequence(cont, call(x)));
  }
  return random_body(g, budget, procs, nullptr);
}

}  // namespace oracle
