#include <random>

#include "chor/epp.hpp"
#include "chor/harness.hpp"
#include "chor/syntax.hpp"

namespace chor {

namespace {

struct ComSpec {
  ProcessName src;
  Expr expr;
  ProcessName dst;
};

Chor build(const std::vector<ComSpec>& coms, Chor tail) {
  for (auto it = coms.rbegin(); it != coms.rend(); ++it) tail = com(it->src, it->expr, it->dst, tail);
  return tail;
}

class Generator {
 public:
  Generator(std::uint64_t seed, const CorpusSpec& spec) : rng_(seed), spec_(spec) {}

  // rng() % n rather than a distribution: identical corpora across standard libraries.
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  Program next() {
    static const char* names[] = {"p", "q", "r", "s"};
    procs_.clear();
    std::size_t n = 2 + pick(spec_.max_procs - 1);
    for (std::size_t i = 0; i < n; ++i) procs_.emplace_back(names[i]);
    std::map<ProcessName, Value> cells;
    for (std::size_t i = 0; i < n; ++i) cells.emplace(procs_[i], Value::integer(static_cast<int>(i)));

    Chor c;
    std::size_t shape = pick(10);
    if (spec_.recursion > 0 && shape < 2) {
      c = loop();
    } else if (spec_.recursion > 0 && shape == 2) {
      RecVar y("Y");
      c = def(y, build(coms(1 + pick(2)), call(y)), straight());
    } else {
      c = straight();
    }
    return {"", c, GlobalState(std::move(cells))};
  }

 private:
  Expr expr() {
    switch (pick(3)) {
      case 0: return parse_expr(std::to_string(pick(4)));
      case 1: return parse_expr("@");
      default: return parse_expr("@ + 1");
    }
  }

  Expr guard() {
    std::string k = std::to_string(pick(4));
    return parse_expr(pick(2) ? "@ < " + k : "@ = " + k);
  }

  ProcessName other(const ProcessName& a) {
    for (;;) {
      const ProcessName& b = procs_[pick(procs_.size())];
      if (b != a) return b;
    }
  }

  // Half of the time an action reuses a process of the previous one, so the
  // corpus has chains that cannot be swapped.
  std::vector<ComSpec> coms(std::size_t n) {
    std::vector<ComSpec> out;
    for (std::size_t i = 0; i < n; ++i) {
      ProcessName a;
      if (!out.empty() && pick(2)) {
        const ComSpec& prev = out.back();
        a = pick(2) ? prev.src : prev.dst;
      } else {
        a = procs_[pick(procs_.size())];
      }
      ProcessName b = other(a);
      if (pick(2)) std::swap(a, b);
      out.push_back({a, expr(), b});
    }
    return out;
  }

  // if d.g then {d.e1 -> x; S} else {d.e2 -> x; S'}, where S and S' differ
  // only in what d sends. Non-deciders project identically.
  Chor conditional(Chor tail_then, Chor tail_else) {
    ProcessName d = procs_[pick(procs_.size())];
    ProcessName x = other(d);
    auto skeleton = coms(pick(3));
    auto vary = [&](std::vector<ComSpec> s) {
      for (auto& cs : s)
        if (cs.src == d) cs.expr = expr();
      return s;
    };
    std::size_t k = pick(4);
    Chor t = com(d, parse_expr(std::to_string(k)), x, build(vary(skeleton), tail_then));
    Chor e = com(d, parse_expr(std::to_string(k + 1)), x, build(vary(skeleton), tail_else));
    return cond(d, guard(), t, e);
  }

  Chor straight() {
    auto pre = coms(2 + pick(std::min<std::size_t>(5, spec_.max_actions - 1)));
    if (spec_.conditionals && pick(2)) {
      auto post = coms(pick(3));
      return build(pre, sequence(conditional(nil(), nil()), build(post, nil())));
    }
    return build(pre, nil());
  }

  Chor loop() {
    RecVar x("X");
    auto pre = coms(pick(2));
    auto body = coms(1 + pick(3));
    Chor inner = spec_.conditionals && pick(2) ? conditional(call(x), call(x)) : call(x);
    return def(x, build(body, inner), build(pre, call(x)));
  }

  std::mt19937_64 rng_;
  CorpusSpec spec_;
  std::vector<ProcessName> procs_;
};

bool chained(const Chor& c) {
  const auto* a = std::get_if<ch::Com>(c.get());
  if (const auto* d = std::get_if<ch::Def>(c.get())) return chained(d->body) || chained(d->cont);
  if (const auto* k = std::get_if<ch::Cond>(c.get()))
    return chained(k->then_branch) || chained(k->else_branch);
  if (!a) return false;
  if (std::holds_alternative<ch::Com>(*a->cont)) {
    ProcessSet x = head_names(*c), y = head_names(*a->cont);
    for (const auto& p : x)
      if (y.count(p)) return true;
  }
  return chained(a->cont);
}

template <class F>
bool any_node(const Chor& c, F f) {
  if (f(*c)) return true;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ch::Cond>) return any_node(x.then_branch, f) || any_node(x.else_branch, f);
        else if constexpr (std::is_same_v<T, ch::Def>) return any_node(x.body, f) || any_node(x.cont, f);
        else if constexpr (std::is_same_v<T, ch::Nil> || std::is_same_v<T, ch::Call>) return false;
        else return any_node(x.cont, f);
      },
      *c);
}

// Leading communications of c, up to the first node that is not one.
std::vector<const ch::Com*> prefix(Chor& c) {
  std::vector<const ch::Com*> out;
  while (const auto* x = std::get_if<ch::Com>(c.get())) {
    out.push_back(x);
    c = x->cont;
  }
  return out;
}

// In a loop with a conditional, a process that never hears from the decider
// can run arbitrarily far ahead, and every conditional it passes doubles the
// asynchronous term. Such loops are left out: each process of the body must
// receive, directly or through others, what the decider sends in one round.
bool lead_bounded(const Chor& c) {
  const auto* d = std::get_if<ch::Def>(c.get());
  if (!d) return true;
  Chor rest = d->body;
  auto body = prefix(rest);
  const auto* k = std::get_if<ch::Cond>(rest.get());
  if (!k) return true;
  Chor branch = k->then_branch;
  auto round = prefix(branch);
  round.insert(round.end(), body.begin(), body.end());
  ProcessSet tied{k->decider};
  for (const auto* x : round)
    if (tied.count(x->src)) tied.insert(x->dst);
  for (const auto& p : pn(d->body))
    if (!tied.count(p)) return false;
  return true;
}

}  // namespace

std::vector<Program> generate_corpus(const CorpusSpec& spec) {
  Generator g(spec.seed, spec);
  std::vector<Program> out;
  for (std::size_t attempts = 0; out.size() < spec.count && attempts < spec.count * 50; ++attempts) {
    Program p = g.next();
    if (action_count(p.chor) > spec.max_actions || !projectable(p.chor) || !lead_bounded(p.chor)) continue;
    char id[16];
    std::snprintf(id, sizeof id, "c%03zu", out.size());
    p.id = id;
    out.push_back(std::move(p));
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<Program>& corpus) {
  CorpusStats s;
  s.programs = corpus.size();
  for (const auto& p : corpus) {
    if (any_node(p.chor, [](const ChorNode& n) { return std::holds_alternative<ch::Cond>(n); }))
      ++s.with_conditional;
    if (const auto* d = std::get_if<ch::Def>(p.chor.get())) {
      bool live = any_node(d->cont, [&](const ChorNode& n) {
        const auto* c = std::get_if<ch::Call>(&n);
        return c && c->var == d->var;
      });
      ++(live ? s.with_loop : s.with_dead_def);
    }
    if (chained(p.chor)) ++s.with_chain;
  }
  return s;
}

}  // namespace chor
