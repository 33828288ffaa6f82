#include "chor/harness.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "chor/async.hpp"
#include "chor/epp.hpp"
#include "chor/processes.hpp"
#include "chor/syntax.hpp"

namespace chor {

namespace {

constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

template <class S, class T>
struct Space {
  struct Node {
    S state;
    std::vector<T> out;
    std::size_t parent;
    std::string via;
    unsigned depth;
  };
  std::vector<Node> nodes;
  bool capped = false;
  std::optional<std::pair<std::size_t, std::string>> error;
};

// Breadth-first exploration up to `depth` steps, deduplicating states by key.
// Successors are computed for every node, including those at the bound.
template <class S, class T, class Succ, class Key>
Space<S, T> bfs(const S& init, Succ succ, Key key, unsigned depth, std::size_t cap) {
  Space<S, T> sp;
  std::unordered_set<std::string> seen{key(init)};
  sp.nodes.push_back({init, {}, kRoot, "", 0});
  for (std::size_t i = 0; i < sp.nodes.size(); ++i) {
    std::vector<T> out;
    try {
      out = succ(sp.nodes[i].state);
    } catch (const std::exception& e) {
      sp.error = {i, e.what()};
      return sp;
    }
    unsigned d = sp.nodes[i].depth;
    if (d < depth) {
      for (const auto& t : out) {
        if (!seen.insert(key(t.target)).second) continue;
        if (sp.nodes.size() >= cap) {
          sp.capped = true;
          break;
        }
        sp.nodes.push_back({t.target, {}, i, t.label.signature(), d + 1});
      }
    }
    sp.nodes[i].out = std::move(out);
  }
  return sp;
}

using ChorSpace = Space<Configuration, Transition>;
using NetSpace = Space<Network, NetTransition>;

std::string net_key(const Network& n) { return render(normalize_network(n)); }

ChorSpace explore(const Configuration& cfg, Mode mode, unsigned depth, std::size_t cap) {
  return bfs<Configuration, Transition>(
      cfg, [mode](const Configuration& c) { return enabled(c, mode); },
      [](const Configuration& c) { return config_key(c); }, depth, cap);
}

NetSpace explore(const Network& n, Mode mode, unsigned depth, std::size_t cap) {
  return bfs<Network, NetTransition>(
      n, [mode](const Network& m) { return enabled_net(m, mode); }, net_key, depth, cap);
}

template <class Sp>
std::vector<std::string> path_to(const Sp& sp, std::size_t i) {
  std::vector<std::string> out;
  for (; i != kRoot && sp.nodes[i].parent != kRoot; i = sp.nodes[i].parent) out.push_back(sp.nodes[i].via);
  std::reverse(out.begin(), out.end());
  return out;
}

std::string show(const Configuration& c) { return render(c.chor) + " " + c.state.to_string(); }
std::string show(const Network& n) { return render(n); }

const char* mode_name(Mode m) { return m == Mode::Sync ? "sync" : "async"; }

template <class Sp>
void fail(ProgramResult& r, const Sp& sp, std::size_t i, const std::string& mode, std::string detail) {
  if (r.verdict == Verdict::Fail) return;
  r.verdict = Verdict::Fail;
  r.counterexample = Counterexample{r.program, mode, path_to(sp, i), show(sp.nodes[i].state), std::move(detail)};
}

// Exploration errors fail the check; hitting the cap makes it inconclusive.
template <class Sp>
bool admit(ProgramResult& r, const Sp& sp, const std::string& mode) {
  r.states += sp.nodes.size();
  if (sp.error) {
    fail(r, sp, sp.error->first, mode, sp.error->second);
    return false;
  }
  if (sp.capped && r.verdict == Verdict::Pass) {
    r.verdict = Verdict::BudgetExceeded;
    r.counterexample = Counterexample{r.program, mode, {}, "", "state cap reached"};
  }
  return true;
}

bool equivalent(const Configuration& a, const Configuration& b) {
  return config_key(a) == config_key(b) || equivalent_configs(a, b, 1);
}

template <class T>
const T* find_step(const std::vector<T>& ts, Rule rule, const std::vector<ProcessName>& subjects,
                   const std::optional<Value>& v) {
  for (const auto& t : ts)
    if (t.label.rule == rule && t.label.subjects == subjects && t.label.value == v) return &t;
  return nullptr;
}

// Lockstep: a bijection between choreography and network steps by signature,
// with the projection of each choreography successor equivalent to the
// matching network successor.
template <class Project>
std::optional<std::string> lockstep(const std::vector<Transition>& cs, const std::vector<NetTransition>& ns,
                                    Project project, unsigned budget) {
  std::map<std::string, const Transition*> cm;
  std::map<std::string, const NetTransition*> nm;
  for (const auto& t : cs)
    if (!cm.emplace(t.label.signature(), &t).second) return "duplicate choreography step " + t.label.signature();
  for (const auto& t : ns)
    if (!nm.emplace(t.label.signature(), &t).second) return "duplicate network step " + t.label.signature();
  auto listing = [](const auto& m) {
    std::string s;
    for (const auto& [k, _] : m) s += (s.empty() ? "" : ", ") + k;
    return "{" + s + "}";
  };
  if (cm.size() != nm.size() ||
      !std::equal(cm.begin(), cm.end(), nm.begin(), [](const auto& a, const auto& b) { return a.first == b.first; }))
    return "choreography steps " + listing(cm) + " vs network steps " + listing(nm);
  for (const auto& [sig, ct] : cm) {
    Network expected = project(ct->target);
    const NetTransition* nt = nm.at(sig);
    if (network_equiv(expected, nt->target, budget) != Answer::Yes)
      return "after " + sig + ": projection " + render(normalize_network(expected)) + " vs network " +
             render(normalize_network(nt->target));
  }
  return std::nullopt;
}

Configuration initial(const Program& p) { return {p.chor, p.state}; }

ProgramResult started(const std::string& id) {
  ProgramResult r;
  r.program = id;
  return r;
}

// Contexts: one communication replaced by a hole, or the same communication
// at the same relative position in both branches of a conditional.
struct Group {
  std::string head;
  Chor node;
  std::vector<Path> paths;
};

std::vector<Group> harvest(const Chor& c) {
  std::vector<Group> out;
  auto prefixed = [](std::vector<Group> gs, Step s) {
    for (auto& g : gs)
      for (auto& p : g.paths) p.insert(p.begin(), s);
    return gs;
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ch::Com>) {
          out.push_back({render_head(*c), c, {Path{}}});
          for (auto& g : prefixed(harvest(x.cont), Step::Cont)) out.push_back(std::move(g));
        } else if constexpr (std::is_same_v<T, ch::Cond>) {
          auto l = harvest(x.then_branch);
          auto r = harvest(x.else_branch);
          for (const auto& a : l)
            for (const auto& b : r)
              if (a.head == b.head && a.paths == b.paths) {
                Group m{a.head, a.node, {}};
                for (auto p : a.paths) {
                  p.insert(p.begin(), Step::Then);
                  m.paths.push_back(p);
                }
                for (auto p : b.paths) {
                  p.insert(p.begin(), Step::Else);
                  m.paths.push_back(p);
                }
                out.push_back(std::move(m));
              }
          for (auto& g : prefixed(l, Step::Then)) out.push_back(std::move(g));
          for (auto& g : prefixed(r, Step::Else)) out.push_back(std::move(g));
        } else if constexpr (std::is_same_v<T, ch::Def> || std::is_same_v<T, ch::RtSend> ||
                             std::is_same_v<T, ch::RtRecv> || std::is_same_v<T, ch::Hole>) {
          for (auto& g : prefixed(harvest(x.cont), Step::Cont)) out.push_back(std::move(g));
        }
      },
      *c);
  return out;
}

bool has_step_to(const Configuration& from, const Configuration& expected) {
  for (const auto& t : enabled_async(from))
    if (equivalent(t.target, expected)) return true;
  return false;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

Answer network_equiv(const Network& a, const Network& b, unsigned unfold_budget) {
  Network x = normalize_network(a), y = normalize_network(b);
  if (x.size() != y.size()) return Answer::No;
  Answer result = Answer::Yes;
  for (const auto& [p, pa] : x.processes()) {
    if (!y.contains(p)) return Answer::No;
    const Process& pb = y.at(p);
    if (!(pa.state == pb.state) || !(pa.queue == pb.queue)) return Answer::No;
    if (same(pa.behaviour, pb.behaviour)) continue;
    // Forms reachable from each side with at most `unfold_budget` unfoldings.
    auto reach = [&](const Behaviour& start, bool& open) {
      std::vector<Behaviour> all{start}, frontier{start};
      for (unsigned i = 0; i < unfold_budget; ++i) {
        std::vector<Behaviour> next;
        for (const auto& f : frontier)
          for (auto& u : unfold_once(f)) next.push_back(normalize_behaviour(u));
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
      }
      for (const auto& f : frontier)
        if (!unfold_once(f).empty()) open = true;
      return all;
    };
    bool open = false;
    auto ra = reach(pa.behaviour, open);
    auto rb = reach(pb.behaviour, open);
    std::set<std::string> keys;
    for (const auto& f : ra) keys.insert(render(f));
    bool met = std::any_of(rb.begin(), rb.end(), [&](const Behaviour& f) { return keys.count(render(f)) != 0; });
    if (!met) {
      if (!open) return Answer::No;
      result = Answer::Unknown;
    }
  }
  return result;
}

ProgramResult check_deadlock_freedom(const Program& p, Mode mode, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sp = explore(initial(p), mode, b.depth, b.cap);
  if (!admit(r, sp, mode_name(mode))) return r;
  for (std::size_t i = 0; i < sp.nodes.size(); ++i) {
    ++r.checks;
    if (sp.nodes[i].out.empty() && !is_nil(normal_form(sp.nodes[i].state.chor)))
      fail(r, sp, i, mode_name(mode), "stuck choreography");
  }
  Network n = epp_sync(p.chor, p.state);
  if (mode == Mode::Async) n = lift_to_async(n);
  std::string net_mode = mode == Mode::Sync ? "sp" : "asp";
  auto ns = explore(n, mode, b.depth, b.cap);
  if (!admit(r, ns, net_mode)) return r;
  for (std::size_t i = 0; i < ns.nodes.size(); ++i) {
    ++r.checks;
    if (!ns.nodes[i].out.empty()) continue;
    NetStatus st = classify(ns.nodes[i].state, mode);
    if (st != NetStatus::Terminated) fail(r, ns, i, net_mode, std::string("projected network ") + status_name(st));
  }
  return r;
}

ProgramResult check_epp_sync(const Program& p, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sp = explore(initial(p), Mode::Sync, b.depth, b.cap);
  if (!admit(r, sp, "sync")) return r;
  auto project = [](const Configuration& c) { return epp_sync(c.chor, c.state); };
  for (std::size_t i = 0; i < sp.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    ++r.checks;
    try {
      const auto& node = sp.nodes[i];
      if (auto bad = lockstep(node.out, enabled_sp(project(node.state)), project, b.unfold_budget))
        fail(r, sp, i, "sync", *bad);
    } catch (const std::exception& e) {
      fail(r, sp, i, "sync", e.what());
    }
  }
  return r;
}

ProgramResult check_epp_async(const Program& p, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sp = explore(initial(p), Mode::Async, b.depth, b.cap);
  if (!admit(r, sp, "async")) return r;
  auto project = [](const Configuration& c) { return epp_async(c.chor, c.state); };
  for (std::size_t i = 0; i < sp.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    ++r.checks;
    try {
      const auto& node = sp.nodes[i];
      if (auto bad = lockstep(node.out, enabled_asp(project(node.state)), project, b.unfold_budget))
        fail(r, sp, i, "async", *bad);
    } catch (const std::exception& e) {
      fail(r, sp, i, "async", e.what());
    }
  }
  return r;
}

ProgramResult check_async_equivalence(const Program& p, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sync = explore(initial(p), Mode::Sync, b.depth, b.cap);
  if (!admit(r, sync, "sync")) return r;

  // (i) every synchronous step is ComS;ComR, or the same conditional step.
  for (std::size_t i = 0; i < sync.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    const auto& node = sync.nodes[i];
    auto first = enabled_async(node.state);
    for (const auto& t : node.out) {
      ++r.checks;
      std::optional<Configuration> end;
      if (t.label.rule == Rule::Com) {
        if (const auto* s = find_step(first, Rule::ComS, t.label.subjects, t.label.value)) {
          auto second = enabled_async(s->target);
          if (const auto* v = find_step(second, Rule::ComR, t.label.subjects, t.label.value)) end = v->target;
        }
      } else if (const auto* s = find_step(first, t.label.rule, t.label.subjects, t.label.value)) {
        end = s->target;
      }
      if (!end || !equivalent(*end, t.target))
        fail(r, sync, i, "sync", "no asynchronous match for " + t.label.signature());
    }
  }
  if (r.verdict == Verdict::Fail) return r;

  // (ii) every asynchronous configuration joins the synchronous ones.
  auto reach = explore(initial(p), Mode::Sync, b.depth + b.join_depth, b.cap);
  if (!admit(r, reach, "sync")) return r;
  std::unordered_set<std::string> sync_keys;
  for (const auto& n : reach.nodes) sync_keys.insert(config_key(n.state));
  auto async = explore(initial(p), Mode::Async, b.depth, b.cap);
  if (!admit(r, async, "async")) return r;
  auto rank = [](Rule rule) { return rule == Rule::ComR ? 0 : rule == Rule::ComS ? 1 : 2; };
  // Keys known to reach a synchronous configuration; drains stop on them.
  std::unordered_set<std::string> joins = sync_keys;
  for (std::size_t i = 0; i < async.nodes.size(); ++i) {
    ++r.checks;
    Configuration c = async.nodes[i].state;
    std::vector<std::string> walked;
    bool joined = false;
    for (unsigned k = 0; k <= b.join_depth; ++k) {
      std::string key = config_key(c);
      if (joins.count(key)) {
        joined = true;
        break;
      }
      walked.push_back(std::move(key));
      auto ts = enabled_async(c);
      if (ts.empty()) break;
      auto best = std::min_element(ts.begin(), ts.end(), [&](const auto& x, const auto& y) {
        return rank(x.label.rule) < rank(y.label.rule);
      });
      c = best->target;
    }
    if (joined) joins.insert(walked.begin(), walked.end());
    if (!joined) {
      auto around = explore(async.nodes[i].state, Mode::Async, std::min(b.join_depth, 6u), 5000);
      joined = std::any_of(around.nodes.begin(), around.nodes.end(),
                           [&](const auto& n) { return sync_keys.count(config_key(n.state)) != 0; });
    }
    if (!joined && r.verdict == Verdict::Pass) {
      r.verdict = Verdict::BudgetExceeded;
      r.counterexample = Counterexample{p.id, "async", path_to(async, i), show(async.nodes[i].state),
                                        "no join with a synchronous configuration within the bound"};
    }
  }
  return r;
}

ProgramResult check_diamond(const Program& p, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sp = explore(initial(p), Mode::Async, b.depth, b.cap);
  if (!admit(r, sp, "async")) return r;
  std::unordered_map<std::string, std::vector<Configuration>> memo;
  auto successors = [&](const Configuration& c) -> const std::vector<Configuration>& {
    std::string k = config_key(c);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    std::vector<Configuration> out;
    for (auto& t : enabled_async(c)) out.push_back(t.target);
    return memo.emplace(k, std::move(out)).first->second;
  };
  for (std::size_t i = 0; i < sp.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    const auto& out = sp.nodes[i].out;
    for (std::size_t x = 0; x < out.size(); ++x) {
      for (std::size_t y = x + 1; y < out.size(); ++y) {
        if (config_key(out[x].target) == config_key(out[y].target)) continue;
        ++r.checks;
        const auto& sx = successors(out[x].target);
        const auto& sy = successors(out[y].target);
        std::set<std::string> kx;
        for (const auto& c : sx) kx.insert(config_key(c));
        bool closed = std::any_of(sy.begin(), sy.end(), [&](const auto& c) { return kx.count(config_key(c)) != 0; });
        for (std::size_t u = 0; !closed && u < sx.size(); ++u)
          for (std::size_t v = 0; !closed && v < sy.size(); ++v) closed = equivalent(sx[u], sy[v]);
        if (!closed)
          fail(r, sp, i, "async", "diamond does not close for " + out[x].label.signature() + " and " +
                                      out[y].label.signature());
      }
    }
  }
  return r;
}

ProgramResult check_sp_asp_simulation(const std::string& id, const Network& n, const Bounds& b) {
  ProgramResult r = started(id);
  auto sp = explore(n, Mode::Sync, b.depth, b.cap);
  if (!admit(r, sp, "sp")) return r;
  for (std::size_t i = 0; i < sp.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    const auto& node = sp.nodes[i];
    Network lifted = lift_to_async(node.state);
    auto first = enabled_asp(lifted);
    for (const auto& t : node.out) {
      ++r.checks;
      std::optional<Network> end;
      if (t.label.rule == Rule::Com) {
        if (const auto* s = find_step(first, Rule::ComS, t.label.subjects, t.label.value)) {
          auto second = enabled_asp(s->target);
          if (const auto* v = find_step(second, Rule::ComR, t.label.subjects, t.label.value)) end = v->target;
        }
      } else if (const auto* s = find_step(first, t.label.rule, t.label.subjects, t.label.value)) {
        end = s->target;
      }
      if (!end || network_equiv(*end, lift_to_async(t.target), 0) != Answer::Yes)
        fail(r, sp, i, "sp", "step " + t.label.signature() + " not simulated in the lifted network");
    }
  }
  return r;
}

ProgramResult check_abstract_async(const Program& p, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sp = explore(initial(p), Mode::Sync, b.context_depth, b.cap);
  if (!admit(r, sp, "sync")) return r;
  for (std::size_t i = 0; i < sp.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    const Configuration& cfg = sp.nodes[i].state;
    for (const auto& g : harvest(cfg.chor)) {
      const auto& c = std::get<ch::Com>(*g.node);
      Chor ctx = rewrite_at(cfg.chor, g.paths, [](const Chor& n) { return hole(std::get<ch::Com>(*n).cont); });
      Value v = eval_expr(c.expr, cfg.state, c.src);
      auto plug = [&](auto make) { return fill_holes(ctx, make); };
      if (next_action(ctx, c.src) == NextVerdict::Hole) {
        ++r.checks;
        Configuration from{plug([&](const Chor& k) { return com(c.src, c.expr, c.dst, k); }), cfg.state};
        Configuration to{plug([&](const Chor& k) { return rt_recv(c.src, v, c.dst, k); }), cfg.state};
        if (!has_step_to(from, to))
          fail(r, sp, i, "sync", "send clause fails for context of '" + g.head + "': " + render(ctx));
      }
      if (next_action(ctx, c.dst) == NextVerdict::Hole) {
        ++r.checks;
        Configuration from{plug([&](const Chor& k) { return rt_recv(c.src, v, c.dst, k); }), cfg.state};
        Configuration to{plug([](const Chor& k) { return k; }), cfg.state.updated(c.dst, v)};
        if (!has_step_to(from, to))
          fail(r, sp, i, "sync", "receive clause fails for context of '" + g.head + "': " + render(ctx));
      }
    }
  }
  return r;
}

ProgramResult check_wf_preservation(const Program& p, const Bounds& b) {
  ProgramResult r = started(p.id);
  auto sp = explore(initial(p), Mode::Async, b.depth, b.cap);
  if (!admit(r, sp, "async")) return r;
  for (std::size_t i = 0; i < sp.nodes.size() && r.verdict != Verdict::Fail; ++i) {
    if (!well_formed(sp.nodes[i].state.chor).ok) continue;
    for (const auto& t : sp.nodes[i].out) {
      ++r.checks;
      auto w = well_formed(t.target.chor);
      if (!w.ok) fail(r, sp, i, "async", "successor after " + t.label.signature() + " is ill-formed: " + w.diagnosis);
    }
  }
  return r;
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"t1", "t5", "t2", "t8", "t6", "diamond", "t7", "abstract-async", "wf"};
  return ids;
}

bool known_theorem(const std::string& id) {
  const auto& ids = theorem_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

ProgramResult check_program(const std::string& theorem, const Program& p, const Bounds& b) {
  try {
    if (theorem == "t1") return check_deadlock_freedom(p, Mode::Sync, b);
    if (theorem == "t5") return check_deadlock_freedom(p, Mode::Async, b);
    if (theorem == "t2") return check_epp_sync(p, b);
    if (theorem == "t8") return check_epp_async(p, b);
    if (theorem == "t6") return check_async_equivalence(p, b);
    if (theorem == "diamond") return check_diamond(p, b);
    if (theorem == "t7") return check_sp_asp_simulation(p.id, epp_sync(p.chor, p.state), b);
    if (theorem == "abstract-async") return check_abstract_async(p, b);
    if (theorem == "wf") return check_wf_preservation(p, b);
  } catch (const std::exception& e) {
    ProgramResult r = started(p.id);
    r.verdict = Verdict::Fail;
    r.counterexample = Counterexample{p.id, "", {}, render(p.chor), e.what()};
    return r;
  }
  throw std::invalid_argument("unknown theorem '" + theorem + "'");
}

namespace {

TheoremReport aggregate(const std::string& theorem, std::vector<ProgramResult> results) {
  TheoremReport rep;
  rep.theorem = theorem;
  rep.corpus_size = results.size();
  for (const auto& r : results) {
    rep.states += r.states;
    rep.checks += r.checks;
    if (r.verdict == Verdict::Fail && rep.verdict != Verdict::Fail) {
      rep.verdict = Verdict::Fail;
      rep.counterexample = r.counterexample;
    } else if (r.verdict == Verdict::BudgetExceeded && rep.verdict == Verdict::Pass) {
      rep.verdict = Verdict::BudgetExceeded;
      rep.counterexample = r.counterexample;
    }
  }
  rep.programs = std::move(results);
  return rep;
}

}  // namespace

TheoremReport verify(const std::string& theorem, const std::vector<Program>& corpus, const Bounds& b) {
  if (!known_theorem(theorem)) throw std::invalid_argument("unknown theorem '" + theorem + "'");
  std::vector<ProgramResult> results(corpus.size());
  const long n = static_cast<long>(corpus.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) results[i] = check_program(theorem, corpus[i], b);
  return aggregate(theorem, std::move(results));
}

TheoremReport verify_serial(const std::string& theorem, const std::vector<Program>& corpus, const Bounds& b) {
  if (!known_theorem(theorem)) throw std::invalid_argument("unknown theorem '" + theorem + "'");
  std::vector<ProgramResult> results;
  for (const auto& p : corpus) results.push_back(check_program(theorem, p, b));
  return aggregate(theorem, std::move(results));
}

std::string report_json(const std::vector<TheoremReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  auto cex = [](const Counterexample& c) {
    nlohmann::ordered_json j;
    j["program"] = c.program;
    j["mode"] = c.mode;
    j["path"] = c.path;
    j["configuration"] = c.configuration;
    j["detail"] = c.detail;
    return j;
  };
  for (const auto& rep : reports) {
    nlohmann::ordered_json j;
    j["theorem"] = rep.theorem;
    j["corpus_size"] = rep.corpus_size;
    j["states"] = rep.states;
    j["checks"] = rep.checks;
    j["verdict"] = verdict_name(rep.verdict);
    if (rep.counterexample) j["counterexample"] = cex(*rep.counterexample);
    nlohmann::ordered_json progs = nlohmann::ordered_json::array();
    for (const auto& r : rep.programs) {
      nlohmann::ordered_json pj;
      pj["theorem"] = rep.theorem;
      pj["program"] = r.program;
      pj["verdict"] = verdict_name(r.verdict);
      pj["states"] = r.states;
      if (r.counterexample) pj["counterexample"] = cex(*r.counterexample);
      progs.push_back(pj);
    }
    j["programs"] = progs;
    out.push_back(j);
  }
  return out.dump(2);
}

std::string report_table(const std::vector<TheoremReport>& reports) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %8s %10s %10s  %s\n", "theorem", "programs", "states", "checks", "verdict");
  os << line;
  for (const auto& rep : reports) {
    std::snprintf(line, sizeof line, "%-16s %8zu %10zu %10zu  %s\n", rep.theorem.c_str(), rep.corpus_size,
                  rep.states, rep.checks, verdict_name(rep.verdict));
    os << line;
    if (rep.counterexample) {
      const auto& c = *rep.counterexample;
      os << "  " << c.program << " [" << c.mode << "] " << c.detail << "\n";
      if (!c.configuration.empty()) os << "    at " << c.configuration << "\n";
      if (!c.path.empty()) {
        os << "    via";
        for (const auto& s : c.path) os << " | " << s;
        os << "\n";
      }
    }
  }
  return os.str();
}

std::optional<Configuration> replay(const Configuration& cfg, Mode mode, const std::vector<std::string>& path) {
  Configuration c = cfg;
  for (const auto& sig : path) {
    auto ts = enabled(c, mode);
    auto it = std::find_if(ts.begin(), ts.end(), [&](const Transition& t) { return t.label.signature() == sig; });
    if (it == ts.end()) return std::nullopt;
    c = it->target;
  }
  return c;
}

}  // namespace chor
