#include "chor/async.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "chor/precongruence.hpp"
#include "chor/semantics.hpp"
#include "chor/syntax.hpp"

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct FoldFailure {
  std::string message;
};

bool straight_action(const Chor& c) {
  return std::holds_alternative<ch::Com>(*c) || std::holds_alternative<ch::RtSend>(*c) ||
         std::holds_alternative<ch::RtRecv>(*c);
}

Chor cont_of(const Chor& c) {
  return std::visit(overloaded{
                        [](const ch::Com& x) { return x.cont; },
                        [](const ch::RtSend& x) { return x.cont; },
                        [](const ch::RtRecv& x) { return x.cont; },
                        [&](const auto&) { return c; },
                    },
                    *c);
}

bool carries(const Chor& c, Tag t) {
  const auto* r = std::get_if<ch::RtRecv>(c.get());
  if (!r) return false;
  const auto* tag = std::get_if<Tag>(&r->payload);
  return tag && *tag == t;
}

Chor fold(const Chor& c);

// Joins a runtime send with its receive. Actions in between that depend on
// the sender stay after the communication, the others move before it.
Chor fold_send(const Chor& c) {
  const auto& s = std::get<ch::RtSend>(*c);
  std::vector<Chor> between;
  Chor cur = s.cont;
  while (straight_action(cur) && !carries(cur, s.tag)) {
    between.push_back(cur);
    cur = cont_of(cur);
  }
  if (!carries(cur, s.tag))
    throw FoldFailure{"send '" + render_head(*c) + "' has no matching receive on its path"};
  const auto& r = std::get<ch::RtRecv>(*cur);
  if (r.src != s.src)
    throw FoldFailure{"receive '" + render_head(*cur) + "' names the wrong sender"};
  ProcessSet chain{s.src};
  std::vector<Chor> after, before;
  for (const auto& n : between) {
    ProcessSet names = head_names(*n);
    bool dependent = std::any_of(names.begin(), names.end(),
                                 [&](const ProcessName& p) { return chain.count(p) != 0; });
    if (dependent) {
      if (names.count(r.dst))
        throw FoldFailure{"receive '" + render_head(*cur) + "' cannot be moved next to its send"};
      chain.insert(names.begin(), names.end());
      after.push_back(n);
    } else {
      before.push_back(n);
    }
  }
  Chor k = r.cont;
  for (auto it = after.rbegin(); it != after.rend(); ++it) k = with_cont(*it, k);
  k = com(s.src, s.expr, r.dst, k);
  for (auto it = before.rbegin(); it != before.rend(); ++it) k = with_cont(*it, k);
  return fold(k);
}

Chor fold(const Chor& c) {
  return std::visit(
      overloaded{
          [&](const ch::Nil&) { return c; },
          [&](const ch::Call&) { return c; },
          [&](const ch::RtSend&) { return fold_send(c); },
          [&](const ch::RtRecv& x) -> Chor {
            if (std::holds_alternative<Tag>(x.payload))
              throw FoldFailure{"receive '" + render_head(*c) + "' has no matching send before it"};
            return with_cont(c, fold(x.cont));
          },
          [&](const ch::Cond& x) {
            return cond(x.decider, x.guard, fold(x.then_branch), fold(x.else_branch));
          },
          [&](const ch::Def& x) { return def(x.var, fold(x.body), fold(x.cont)); },
          [&](const auto& x) { return with_cont(c, fold(x.cont)); },
      },
      *c);
}

struct Group {
  std::string key;
  std::vector<Path> paths;
};

// Instantiated receives whose sender could have sent from the top.
struct ReceiveCollector {
  Path path;

  std::vector<Group> walk(const Chor& c, const ProcessSet& blocked) {
    std::vector<Group> out;
    auto cont = [&](const Chor& k, ProcessSet b) {
      path.push_back(Step::Cont);
      auto inner = walk(k, b);
      path.pop_back();
      for (auto& g : inner) out.push_back(std::move(g));
    };
    std::visit(overloaded{
                   [&](const ch::RtRecv& x) {
                     if (std::holds_alternative<Value>(x.payload) && !blocked.count(x.src))
                       out.push_back({render_head(*c), {path}});
                     ProcessSet b = blocked;
                     b.insert(x.dst);
                     cont(x.cont, b);
                   },
                   [&](const ch::Cond& x) {
                     ProcessSet b = blocked;
                     b.insert(x.decider);
                     path.push_back(Step::Then);
                     auto left = walk(x.then_branch, b);
                     path.back() = Step::Else;
                     auto right = walk(x.else_branch, b);
                     path.pop_back();
                     // Equal receives pair up in order: the k-th on each side.
                     std::map<std::string, std::size_t> seen;
                     for (auto& l : left) {
                       std::size_t k = seen[l.key]++;
                       auto it = std::find_if(right.begin(), right.end(), [&](const Group& g) {
                         return g.key == l.key && k-- == 0;
                       });
                       if (it == right.end()) continue;
                       l.paths.insert(l.paths.end(), it->paths.begin(), it->paths.end());
                       out.push_back(std::move(l));
                     }
                   },
                   [&](const ch::Def& x) { cont(x.cont, blocked); },
                   [&](const ch::Nil&) {},
                   [&](const ch::Call&) {},
                   [&](const auto& x) {
                     ProcessSet b = blocked;
                     for (const auto& p : head_names(*c)) b.insert(p);
                     cont(x.cont, b);
                   },
               },
               *c);
    return out;
  }
};

// Every instantiated receive, with its path; receives inside definition
// bodies are reported with `in_body`.
void receive_positions(const Chor& c, Path& path, std::vector<std::pair<Path, std::string>>& out,
                       bool& in_body) {
  auto cont = [&](const Chor& k) {
    path.push_back(Step::Cont);
    receive_positions(k, path, out, in_body);
    path.pop_back();
  };
  std::visit(overloaded{
                 [&](const ch::RtRecv& x) {
                   out.emplace_back(path, render_head(*c));
                   cont(x.cont);
                 },
                 [&](const ch::Cond& x) {
                   path.push_back(Step::Then);
                   receive_positions(x.then_branch, path, out, in_body);
                   path.back() = Step::Else;
                   receive_positions(x.else_branch, path, out, in_body);
                   path.pop_back();
                 },
                 [&](const ch::Def& x) {
                   if (has_runtime_terms(x.body)) in_body = true;
                   cont(x.cont);
                 },
                 [&](const ch::Nil&) {},
                 [&](const ch::Call&) {},
                 [&](const auto& x) { cont(x.cont); },
             },
             *c);
}

}  // namespace

Chor unfold_com(const Chor& c, const Path& at, TagSupply& supply) {
  Tag x = supply.fresh();
  return rewrite_at(c, {at}, [&](const Chor& n) {
    const auto* cm = std::get_if<ch::Com>(n.get());
    if (!cm) throw NotACom("no communication at the given position");
    return rt_send(cm->src, cm->expr, x, rt_recv(cm->src, x, cm->dst, cm->cont));
  });
}

TagSupply supply_above(const Chor& c) {
  TagSupply s;
  if (auto t = max_tag(c)) s.observe(*t);
  return s;
}

const char* verdict_name(NextVerdict v) {
  switch (v) {
    case NextVerdict::Comm: return "comm";
    case NextVerdict::Cond: return "cond";
    case NextVerdict::Hole: return "hole";
    case NextVerdict::Undefined: return "undefined";
  }
  return "?";
}

NextVerdict next_action(const Chor& ctx, const ProcessName& r) {
  return std::visit(overloaded{
                        [&](const ch::Hole&) { return NextVerdict::Hole; },
                        [&](const ch::Nil&) { return NextVerdict::Undefined; },
                        [&](const ch::Call&) { return NextVerdict::Undefined; },
                        [&](const ch::Cond& x) {
                          if (x.decider == r) return NextVerdict::Cond;
                          NextVerdict a = next_action(x.then_branch, r);
                          NextVerdict b = next_action(x.else_branch, r);
                          return a == b ? a : NextVerdict::Undefined;
                        },
                        [&](const ch::Def& x) {
                          return next_action(substitute_call(x.cont, x.var, x.body), r);
                        },
                        [&](const auto& x) {
                          if (head_names(*ctx).count(r)) return NextVerdict::Comm;
                          return next_action(x.cont, r);
                        },
                    },
                    *ctx);
}

WellFormedness well_formed(const Chor& c) {
  WellFormedness w;
  try {
    w.folded = fold(c);
  } catch (const FoldFailure& f) {
    w.diagnosis = f.message;
    return w;
  }
  std::vector<std::pair<Path, std::string>> positions;
  Path path;
  bool in_body = false;
  receive_positions(w.folded, path, positions, in_body);
  if (in_body) {
    w.diagnosis = "runtime terms inside a recursive definition";
    return w;
  }
  ReceiveCollector col;
  std::vector<Path> covered;
  for (auto& g : col.walk(w.folded, {}))
    covered.insert(covered.end(), g.paths.begin(), g.paths.end());
  for (const auto& [p, text] : positions) {
    if (std::find(covered.begin(), covered.end(), p) == covered.end()) {
      w.diagnosis = "orphan receive '" + text +
                    "': its sender has actions that must happen before the message is sent";
      return w;
    }
  }
  w.ok = true;
  w.canonical = normal_form(w.folded);
  return w;
}

}  // namespace chor
