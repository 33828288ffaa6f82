#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "chor/semantics.hpp"
#include "chor/syntax.hpp"

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using Env = std::map<RecVar, Chor>;

struct Collector {
  Mode mode;
  Env env;
  std::set<RecVar> unfolded;
  Path path;

  void add(std::vector<Redex>& out, Redex r) {
    r.paths.push_back(path);
    out.push_back(std::move(r));
  }

  std::vector<Redex> walk(const Chor& c, const ProcessSet& blocked) {
    std::vector<Redex> out;
    auto descend = [&](Step s, const Chor& k, const ProcessSet& b) {
      path.push_back(s);
      auto inner = walk(k, b);
      path.pop_back();
      out.insert(out.end(), std::make_move_iterator(inner.begin()),
                 std::make_move_iterator(inner.end()));
    };
    auto with = [&](const ProcessSet& b, std::initializer_list<ProcessName> more) {
      ProcessSet r = b;
      r.insert(more.begin(), more.end());
      return r;
    };
    std::visit(
        overloaded{
            [&](const ch::Nil&) {},
            [&](const ch::Hole&) {},
            [&](const ch::Com& x) {
              bool free = !blocked.count(x.src) && (mode == Mode::Async || !blocked.count(x.dst));
              if (free) {
                Redex r;
                r.kind = Redex::Kind::Com;
                r.first = x.src;
                r.second = x.dst;
                r.expr = x.expr;
                r.key = "C|" + render_head(*c);
                add(out, std::move(r));
              }
              descend(Step::Cont, x.cont, with(blocked, {x.src, x.dst}));
            },
            [&](const ch::RtSend& x) {
              if (mode == Mode::Async && !blocked.count(x.src)) {
                Redex r;
                r.kind = Redex::Kind::Send;
                r.first = x.src;
                r.expr = x.expr;
                r.tag = x.tag;
                r.key = "S|" + render_head(*c);
                add(out, std::move(r));
              }
              descend(Step::Cont, x.cont, with(blocked, {x.src}));
            },
            [&](const ch::RtRecv& x) {
              const Value* v = std::get_if<Value>(&x.payload);
              if (mode == Mode::Async && v && !blocked.count(x.dst)) {
                Redex r;
                r.kind = Redex::Kind::Recv;
                r.first = x.src;
                r.second = x.dst;
                r.value = *v;
                r.key = "R|" + render_head(*c);
                add(out, std::move(r));
              }
              descend(Step::Cont, x.cont, with(blocked, {x.dst}));
            },
            [&](const ch::Cond& x) {
              if (!blocked.count(x.decider)) {
                Redex r;
                r.kind = Redex::Kind::Cond;
                r.first = x.decider;
                r.expr = x.guard;
                r.key = "I|" + render_head(*c);
                add(out, std::move(r));
              }
              auto b = with(blocked, {x.decider});
              path.push_back(Step::Then);
              auto left = walk(x.then_branch, b);
              path.back() = Step::Else;
              auto right = walk(x.else_branch, b);
              path.pop_back();
              for (auto& l : left) {
                auto it = std::find_if(right.begin(), right.end(),
                                       [&](const Redex& o) { return o.key == l.key; });
                if (it == right.end()) continue;
                l.paths.insert(l.paths.end(), it->paths.begin(), it->paths.end());
                out.push_back(std::move(l));
              }
            },
            [&](const ch::Def& x) {
              auto saved = env.find(x.var) != env.end() ? std::optional<Chor>(env[x.var])
                                                        : std::nullopt;
              env[x.var] = x.body;
              descend(Step::Cont, x.cont, blocked);
              if (saved) {
                env[x.var] = *saved;
              } else {
                env.erase(x.var);
              }
            },
            [&](const ch::Call& x) {
              auto it = env.find(x.var);
              if (it == env.end() || unfolded.count(x.var)) return;
              Chor body = it->second;
              unfolded.insert(x.var);
              descend(Step::Unfold, body, blocked);
              unfolded.erase(x.var);
            },
        },
        *c);
    return out;
  }
};

Chor rewrite_rec(const Chor& c, const std::vector<const Path*>& ps, std::size_t depth, Env& env,
                 const NodeRewriter& f) {
  for (const Path* p : ps)
    if (p->size() == depth) return f(c);
  std::vector<const Path*> cont, th, el, unf;
  for (const Path* p : ps) {
    switch ((*p)[depth]) {
      case Step::Cont: cont.push_back(p); break;
      case Step::Then: th.push_back(p); break;
      case Step::Else: el.push_back(p); break;
      case Step::Unfold: unf.push_back(p); break;
    }
  }
  auto bad = [] { return std::logic_error("path does not match the term"); };
  return std::visit(
      overloaded{
          [&](const ch::Cond& x) {
            if (!cont.empty() || !unf.empty()) throw bad();
            Chor t = th.empty() ? x.then_branch : rewrite_rec(x.then_branch, th, depth + 1, env, f);
            Chor e = el.empty() ? x.else_branch : rewrite_rec(x.else_branch, el, depth + 1, env, f);
            return cond(x.decider, x.guard, t, e);
          },
          [&](const ch::Def& x) {
            if (cont.size() != ps.size()) throw bad();
            auto saved = env.find(x.var) != env.end() ? std::optional<Chor>(env[x.var])
                                                      : std::nullopt;
            env[x.var] = x.body;
            Chor k = rewrite_rec(x.cont, cont, depth + 1, env, f);
            if (saved) {
              env[x.var] = *saved;
            } else {
              env.erase(x.var);
            }
            return def(x.var, x.body, k);
          },
          [&](const ch::Call& x) {
            if (unf.size() != ps.size()) throw bad();
            auto it = env.find(x.var);
            if (it == env.end()) throw bad();
            Chor body = it->second;
            return rewrite_rec(body, unf, depth + 1, env, f);
          },
          [&](const ch::Nil&) -> Chor { throw bad(); },
          [&](const auto& x) {
            if (cont.size() != ps.size()) throw bad();
            return with_cont(c, rewrite_rec(x.cont, cont, depth + 1, env, f));
          },
      },
      *c);
}

std::optional<ProcessName> receiver_of(const Chor& c, Tag t) {
  return std::visit(overloaded{
                        [&](const ch::Nil&) -> std::optional<ProcessName> { return std::nullopt; },
                        [&](const ch::Call&) -> std::optional<ProcessName> { return std::nullopt; },
                        [&](const ch::RtRecv& x) -> std::optional<ProcessName> {
                          if (auto* tag = std::get_if<Tag>(&x.payload); tag && *tag == t)
                            return x.dst;
                          return receiver_of(x.cont, t);
                        },
                        [&](const ch::Cond& x) {
                          auto r = receiver_of(x.then_branch, t);
                          return r ? r : receiver_of(x.else_branch, t);
                        },
                        [&](const ch::Def& x) {
                          auto r = receiver_of(x.body, t);
                          return r ? r : receiver_of(x.cont, t);
                        },
                        [&](const auto& x) { return receiver_of(x.cont, t); },
                    },
                    *c);
}

Chor continuation(const Chor& c) {
  return std::visit(overloaded{
                        [&](const ch::Com& x) { return x.cont; },
                        [&](const ch::RtSend& x) { return x.cont; },
                        [&](const ch::RtRecv& x) { return x.cont; },
                        [&](const auto&) -> Chor { throw std::logic_error("not an action"); },
                    },
                    *c);
}

}  // namespace

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Com: return "Com";
    case Rule::Then: return "Then";
    case Rule::Else: return "Else";
    case Rule::ComS: return "ComS";
    case Rule::ComR: return "ComR";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
  for (Rule r : {Rule::Com, Rule::Then, Rule::Else, Rule::ComS, Rule::ComR})
    if (s == rule_name(r)) return r;
  return std::nullopt;
}

std::string StepLabel::signature() const {
  std::string s = rule_name(rule);
  s += ' ';
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (i) s += "->";
    s += subjects[i].str();
  }
  if (value) s += " v=" + value->to_string();
  return s;
}

bool same_step(const StepLabel& a, const StepLabel& b) {
  return a.rule == b.rule && a.subjects == b.subjects && a.value == b.value;
}

Chor rewrite_at(const Chor& c, const std::vector<Path>& paths, const NodeRewriter& f) {
  std::vector<const Path*> ps;
  for (const auto& p : paths) ps.push_back(&p);
  Env env;
  return rewrite_rec(c, ps, 0, env, f);
}

Chor fill_holes(const Chor& c, const NodeRewriter& fill) {
  return std::visit(
      overloaded{
          [&](const ch::Hole& x) { return fill(fill_holes(x.cont, fill)); },
          [&](const ch::Nil&) { return c; },
          [&](const ch::Call&) { return c; },
          [&](const ch::Cond& x) {
            return cond(x.decider, x.guard, fill_holes(x.then_branch, fill),
                        fill_holes(x.else_branch, fill));
          },
          [&](const ch::Def& x) {
            return def(x.var, fill_holes(x.body, fill), fill_holes(x.cont, fill));
          },
          [&](const auto& x) { return with_cont(c, fill_holes(x.cont, fill)); },
      },
      *c);
}

std::vector<Redex> redexes(const Chor& c, Mode mode) {
  Collector col{mode, {}, {}, {}};
  auto out = col.walk(c, {});
  for (auto& r : out) std::sort(r.paths.begin(), r.paths.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const Redex& a, const Redex& b) { return a.paths.front() < b.paths.front(); });
  return out;
}

Transition fire(const Configuration& cfg, const Redex& r, Mode mode) {
  Transition t;
  t.label.path = r.paths.front();
  GlobalState state = cfg.state;
  Chor next;
  switch (r.kind) {
    case Redex::Kind::Com: {
      Value v = eval_expr(r.expr, cfg.state, r.first);
      t.label.subjects = {r.first, r.second};
      t.label.value = v;
      if (mode == Mode::Sync) {
        t.label.rule = Rule::Com;
        next = rewrite_at(cfg.chor, r.paths, continuation);
        state = state.updated(r.second, v);
      } else {
        t.label.rule = Rule::ComS;
        next = rewrite_at(cfg.chor, r.paths, [&](const Chor& n) {
          const auto& x = std::get<ch::Com>(*n);
          return rt_recv(x.src, v, x.dst, x.cont);
        });
      }
      break;
    }
    case Redex::Kind::Send: {
      Value v = eval_expr(r.expr, cfg.state, r.first);
      t.label.rule = Rule::ComS;
      t.label.subjects = {r.first};
      if (auto q = receiver_of(cfg.chor, *r.tag)) t.label.subjects.push_back(*q);
      t.label.value = v;
      t.label.tag = r.tag;
      next = instantiate_tag(rewrite_at(cfg.chor, r.paths, continuation), *r.tag, v);
      break;
    }
    case Redex::Kind::Recv: {
      t.label.rule = Rule::ComR;
      t.label.subjects = {r.first, r.second};
      t.label.value = r.value;
      next = rewrite_at(cfg.chor, r.paths, continuation);
      state = state.updated(r.second, *r.value);
      break;
    }
    case Redex::Kind::Cond: {
      Value g = eval_expr(r.expr, cfg.state, r.first);
      if (!g.is_bool())
        throw GuardNotBoolean("guard of '" + r.key.substr(2) + "' evaluates to " + g.to_string());
      bool b = g.as_bool();
      t.label.rule = b ? Rule::Then : Rule::Else;
      t.label.subjects = {r.first};
      next = rewrite_at(cfg.chor, r.paths, [&](const Chor& n) {
        const auto& x = std::get<ch::Cond>(*n);
        return b ? x.then_branch : x.else_branch;
      });
      break;
    }
  }
  t.target = Configuration{collect_garbage(next), std::move(state)};
  return t;
}

std::vector<Transition> enabled(const Configuration& cfg, Mode mode) {
  std::vector<Transition> out;
  for (const auto& r : redexes(cfg.chor, mode)) out.push_back(fire(cfg, r, mode));
  return out;
}

std::vector<Transition> enabled_sync(const Configuration& cfg) { return enabled(cfg, Mode::Sync); }
std::vector<Transition> enabled_async(const Configuration& cfg) {
  return enabled(cfg, Mode::Async);
}

namespace {

void require_enabled(const Configuration& cfg, const Redex& r, Redex::Kind kind) {
  if (r.kind != kind) throw NotEnabled("redex '" + r.key + "' has the wrong kind");
  for (const auto& e : redexes(cfg.chor, Mode::Sync))
    if (e.key == r.key && e.paths == r.paths) return;
  throw NotEnabled("redex '" + r.key + "' is not enabled");
}

}  // namespace

Configuration step_com(const Configuration& cfg, const Redex& r) {
  require_enabled(cfg, r, Redex::Kind::Com);
  return fire(cfg, r, Mode::Sync).target;
}

Configuration step_cond(const Configuration& cfg, const Redex& r) {
  require_enabled(cfg, r, Redex::Kind::Cond);
  return fire(cfg, r, Mode::Sync).target;
}

}  // namespace chor
