#include "chor/run.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <json.hpp>

#include "chor/async.hpp"
#include "chor/precongruence.hpp"
#include "chor/syntax.hpp"

namespace chor {

namespace {

bool matches(const StepLabel& l, const std::string& pattern) {
  std::string sig = l.signature();
  return sig == pattern || sig.rfind(pattern + " ", 0) == 0;
}

std::vector<std::pair<std::string, Value>> cells(const GlobalState& s) {
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& [p, v] : s.cells()) out.emplace_back(p.str(), v);
  return out;
}

std::vector<std::pair<std::string, Value>> cells(const Network& n) {
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& [p, proc] : n.processes()) out.emplace_back(p.str(), proc.state);
  return out;
}

std::vector<StepLabel> labels_of(const auto& transitions) {
  std::vector<StepLabel> out;
  for (const auto& t : transitions) out.push_back(t.label);
  return out;
}

// Tags shown for fused sends, matched to receives in FIFO order per pair.
class TagDisplay {
 public:
  explicit TagDisplay(TagSupply s) : supply_(s) {}

  void annotate(StepLabel& l) {
    if (l.subjects.size() != 2) return;
    auto& fifo = pending_[{l.subjects[0], l.subjects[1]}];
    if (l.rule == Rule::ComS) {
      if (!l.tag) l.tag = supply_.fresh();
      fifo.push_back(*l.tag);
    } else if (l.rule == Rule::ComR && !l.tag) {
      if (fifo.empty()) {
        l.tag = supply_.fresh();
      } else {
        l.tag = fifo.front();
        fifo.pop_front();
      }
    } else if (l.rule == Rule::ComR) {
      std::erase(fifo, *l.tag);
    }
  }

 private:
  TagSupply supply_;
  std::map<std::pair<ProcessName, ProcessName>, std::deque<Tag>> pending_;
};

nlohmann::json to_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_bool()) return v.as_bool();
  return "err";
}

}  // namespace

Scheduler Scheduler::leftmost() {
  return Scheduler([](const std::vector<StepLabel>& o) -> std::optional<std::size_t> {
    if (o.empty()) return std::nullopt;
    return 0;
  });
}

Scheduler Scheduler::random(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return Scheduler([rng](const std::vector<StepLabel>& o) -> std::optional<std::size_t> {
    if (o.empty()) return std::nullopt;
    return static_cast<std::size_t>((*rng)() % o.size());
  });
}

Scheduler Scheduler::script(std::vector<std::string> entries) {
  auto pos = std::make_shared<std::size_t>(0);
  auto list = std::make_shared<std::vector<std::string>>(std::move(entries));
  return Scheduler([pos, list](const std::vector<StepLabel>& o) -> std::optional<std::size_t> {
    if (*pos >= list->size()) return std::nullopt;
    const std::string& e = (*list)[(*pos)++];
    if (!e.empty() && std::all_of(e.begin(), e.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      std::size_t k = std::stoul(e);
      if (k >= 1 && k <= o.size()) return k - 1;
      return std::nullopt;
    }
    for (std::size_t i = 0; i < o.size(); ++i)
      if (matches(o[i], e)) return i;
    return std::nullopt;
  });
}

Scheduler Scheduler::custom(Choose f) { return Scheduler(std::move(f)); }

ChorRun run_chor(const Configuration& cfg, Mode mode, Scheduler& sched, std::size_t max_steps) {
  ChorRun run{{}, cfg};
  TagDisplay tags(supply_above(cfg.chor));
  for (std::size_t i = 1;; ++i) {
    std::vector<Transition> ts;
    try {
      ts = enabled(run.final, mode);
    } catch (const std::exception& e) {
      run.trace.outcome = "error";
      run.trace.error = "step " + std::to_string(i) + ": " + e.what();
      return run;
    }
    if (ts.empty()) {
      run.trace.outcome = is_nil(normal_form(run.final.chor)) ? "terminated" : "stuck";
      return run;
    }
    if (i > max_steps) {
      run.trace.outcome = "budget";
      return run;
    }
    auto pick = sched.choose(labels_of(ts));
    if (!pick || *pick >= ts.size()) {
      run.trace.outcome = "stopped";
      return run;
    }
    Transition& t = ts[*pick];
    if (mode == Mode::Async) tags.annotate(t.label);
    run.final = t.target;
    run.trace.entries.push_back({i, t.label, render(t.target.chor) + " " + t.target.state.to_string(),
                                 cells(t.target.state), std::nullopt});
  }
}

ChorRun run_sync(const Configuration& cfg, Scheduler& sched, std::size_t max_steps) {
  return run_chor(cfg, Mode::Sync, sched, max_steps);
}

ChorRun run_async(const Configuration& cfg, Scheduler& sched, std::size_t max_steps) {
  return run_chor(cfg, Mode::Async, sched, max_steps);
}

NetRun simulate(const Network& n, Mode mode, Scheduler& sched, std::size_t max_steps) {
  NetRun run{{}, n};
  for (std::size_t i = 1;; ++i) {
    std::vector<NetTransition> ts;
    try {
      ts = enabled_net(run.final, mode);
    } catch (const std::exception& e) {
      run.trace.outcome = "error";
      run.trace.error = "step " + std::to_string(i) + ": " + e.what();
      return run;
    }
    if (ts.empty()) {
      run.trace.outcome = status_name(classify(run.final, mode));
      return run;
    }
    if (i > max_steps) {
      run.trace.outcome = "budget";
      return run;
    }
    auto pick = sched.choose(labels_of(ts));
    if (!pick || *pick >= ts.size()) {
      run.trace.outcome = "stopped";
      return run;
    }
    const NetTransition& t = ts[*pick];
    run.final = t.target;
    std::optional<std::size_t> depth;
    if (t.label.rule == Rule::ComS || t.label.rule == Rule::ComR) {
      const ProcessName& q = t.label.subjects[1];
      depth = t.target.contains(q) ? t.target.at(q).queue.lane_depth(t.label.subjects[0]) : 0;
    }
    run.trace.entries.push_back({i, t.label, render(t.target), cells(t.target), depth});
  }
}

std::string format_text(const TraceEntry& e) {
  std::string s = "#" + std::to_string(e.index) + " " + e.label.signature();
  if (e.label.tag) s += " tag=" + render(*e.label.tag);
  if (e.lane_depth) s += " depth=" + std::to_string(*e.lane_depth);
  return s + " :: " + e.successor;
}

std::string format_record(const TraceEntry& e) {
  nlohmann::ordered_json j;
  j["index"] = e.index;
  j["rule"] = rule_name(e.label.rule);
  auto subjects = nlohmann::json::array();
  for (const auto& p : e.label.subjects) subjects.push_back(p.str());
  j["subjects"] = subjects;
  j["value"] = e.label.value ? to_json(*e.label.value) : nlohmann::json(nullptr);
  j["tag"] = e.label.tag ? nlohmann::json(e.label.tag->id) : nlohmann::json(nullptr);
  nlohmann::ordered_json state = nlohmann::ordered_json::object();
  for (const auto& [p, v] : e.state) state[p] = to_json(v);
  j["state"] = state;
  if (e.lane_depth) j["depth"] = *e.lane_depth;
  return j.dump();
}

}  // namespace chor
