#include "chor/precongruence.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "chor/syntax.hpp"

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct Liftable {
  int rank;
  std::string key;
  Chor node;
  std::vector<Path> paths;
  bool conditional;
};

struct NfCollector {
  Path path;

  std::vector<Liftable> walk(const Chor& c, const ProcessSet& blocked, bool under_def) {
    std::vector<Liftable> out;
    auto free = [&](const ProcessSet& names) {
      return std::none_of(names.begin(), names.end(),
                          [&](const ProcessName& p) { return blocked.count(p) != 0; });
    };
    auto action = [&](int rank, const auto& x) {
      ProcessSet names = head_names(*c);
      if (free(names)) out.push_back({rank, render_head(*c), c, {path}, false});
      ProcessSet b = blocked;
      b.insert(names.begin(), names.end());
      path.push_back(Step::Cont);
      auto inner = walk(x.cont, b, under_def);
      path.pop_back();
      for (auto& l : inner) out.push_back(std::move(l));
    };
    std::visit(overloaded{
                   [&](const ch::Com& x) { action(1, x); },
                   [&](const ch::RtSend& x) { action(2, x); },
                   [&](const ch::RtRecv& x) {
                     action(std::holds_alternative<Value>(x.payload) ? 0 : 3, x);
                   },
                   [&](const ch::Cond& x) {
                     if (!under_def && !blocked.count(x.decider))
                       out.push_back({4, render_head(*c), c, {path}, true});
                     ProcessSet b = blocked;
                     b.insert(x.decider);
                     path.push_back(Step::Then);
                     auto left = walk(x.then_branch, b, under_def);
                     path.back() = Step::Else;
                     auto right = walk(x.else_branch, b, under_def);
                     path.pop_back();
                     for (auto& l : left) {
                       auto it = std::find_if(right.begin(), right.end(), [&](const Liftable& o) {
                         return o.rank == l.rank && o.key == l.key;
                       });
                       if (it == right.end()) continue;
                       l.paths.insert(l.paths.end(), it->paths.begin(), it->paths.end());
                       out.push_back(std::move(l));
                     }
                   },
                   [&](const ch::Def& x) {
                     path.push_back(Step::Cont);
                     auto inner = walk(x.cont, blocked, true);
                     path.pop_back();
                     for (auto& l : inner) out.push_back(std::move(l));
                   },
                   [&](const auto&) {},
               },
               *c);
    return out;
  }
};

Chor strip(const Chor& n) {
  return std::visit(overloaded{
                        [](const ch::Com& x) { return x.cont; },
                        [](const ch::RtSend& x) { return x.cont; },
                        [](const ch::RtRecv& x) { return x.cont; },
                        [&](const auto&) { return n; },
                    },
                    *n);
}

Chor nf(const Chor& c) {
  NfCollector col;
  auto lifts = col.walk(c, {}, false);
  if (lifts.empty()) {
    return std::visit(overloaded{
                          [&](const ch::Def& x) { return def(x.var, nf(x.body), nf(x.cont)); },
                          [&](const ch::Hole& x) { return hole(nf(x.cont)); },
                          [&](const auto&) { return c; },
                      },
                      *c);
  }
  auto best = std::min_element(lifts.begin(), lifts.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rank, a.key) < std::tie(b.rank, b.key);
  });
  if (best->conditional) {
    const auto& x = std::get<ch::Cond>(*best->node);
    Chor t = collect_garbage(rewrite_at(c, best->paths, [](const Chor& n) {
      return std::get<ch::Cond>(*n).then_branch;
    }));
    Chor e = collect_garbage(rewrite_at(c, best->paths, [](const Chor& n) {
      return std::get<ch::Cond>(*n).else_branch;
    }));
    return cond(x.decider, x.guard, nf(t), nf(e));
  }
  Chor rest = collect_garbage(rewrite_at(c, best->paths, strip));
  return with_cont(best->node, nf(rest));
}

bool calls(const Chor& c, const RecVar& x) {
  return std::visit(overloaded{
                        [&](const ch::Nil&) { return false; },
                        [&](const ch::Call& y) { return y.var == x; },
                        [&](const ch::Cond& y) {
                          return calls(y.then_branch, x) || calls(y.else_branch, x);
                        },
                        [&](const ch::Def& y) {
                          return y.var != x && (calls(y.body, x) || calls(y.cont, x));
                        },
                        [&](const auto& y) { return calls(y.cont, x); },
                    },
                    *c);
}

}  // namespace

const char* answer_name(Answer a) {
  switch (a) {
    case Answer::No: return "false";
    case Answer::Yes: return "true";
    case Answer::Unknown: return "unknown";
  }
  return "?";
}

Chor normal_form(const Chor& c) { return nf(collect_garbage(c)); }

std::string canonical_key(const Chor& c) { return render(normal_form(c)); }

std::string config_key(const Configuration& cfg) {
  return canonical_key(cfg.chor) + " " + cfg.state.to_string();
}

std::vector<Chor> unfold_once(const Chor& c) {
  std::vector<Chor> out;
  std::visit(overloaded{
                 [&](const ch::Nil&) {},
                 [&](const ch::Call&) {},
                 [&](const ch::Def& x) {
                   if (calls(x.cont, x.var))
                     out.push_back(def(x.var, x.body, substitute_call(x.cont, x.var, x.body)));
                   for (auto& v : unfold_once(x.cont)) out.push_back(def(x.var, x.body, v));
                   for (auto& v : unfold_once(x.body)) out.push_back(def(x.var, v, x.cont));
                 },
                 [&](const ch::Cond& x) {
                   for (auto& v : unfold_once(x.then_branch))
                     out.push_back(cond(x.decider, x.guard, v, x.else_branch));
                   for (auto& v : unfold_once(x.else_branch))
                     out.push_back(cond(x.decider, x.guard, x.then_branch, v));
                 },
                 [&](const auto& x) {
                   for (auto& v : unfold_once(x.cont)) out.push_back(with_cont(c, v));
                 },
             },
             *c);
  return out;
}

Answer precongruent(const Chor& c1, const Chor& c2, unsigned unfold_budget) {
  const std::string target = canonical_key(c2);
  if (canonical_key(c1) == target) return Answer::Yes;
  std::vector<Chor> frontier{c1};
  std::set<std::string> seen{canonical_key(c1)};
  for (unsigned i = 0; i < unfold_budget; ++i) {
    std::vector<Chor> next;
    for (const auto& t : frontier) {
      for (auto& u : unfold_once(t)) {
        std::string k = canonical_key(u);
        if (k == target) return Answer::Yes;
        if (seen.insert(k).second) next.push_back(std::move(u));
      }
    }
    if (next.empty()) return Answer::No;
    frontier = std::move(next);
  }
  for (const auto& t : frontier)
    if (!unfold_once(t).empty()) return Answer::Unknown;
  return Answer::No;
}

bool equivalent_configs(const Configuration& a, const Configuration& b, unsigned unfold_budget) {
  if (!(a.state == b.state)) return false;
  if (precongruent(a.chor, b.chor, unfold_budget) == Answer::Yes) return true;
  return precongruent(b.chor, a.chor, unfold_budget) == Answer::Yes;
}

}  // namespace chor
