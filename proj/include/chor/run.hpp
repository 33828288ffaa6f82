#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chor/network.hpp"
#include "chor/processes.hpp"
#include "chor/semantics.hpp"

namespace chor {

// Picks one of the enabled steps, or nullopt to stop.
class Scheduler {
 public:
  using Choose = std::function<std::optional<std::size_t>(const std::vector<StepLabel>&)>;

  static Scheduler leftmost();
  // Reproducible for a fixed seed.
  static Scheduler random(std::uint64_t seed);
  // Each entry is a 1-based index into the enabled steps or a matcher such as
  // "ComR p->q" (rule and subjects). The run stops when the script ends.
  static Scheduler script(std::vector<std::string> entries);
  static Scheduler custom(Choose f);

  std::optional<std::size_t> choose(const std::vector<StepLabel>& options) { return f_(options); }

 private:
  explicit Scheduler(Choose f) : f_(std::move(f)) {}
  Choose f_;
};

struct TraceEntry {
  std::size_t index = 0;  // 1-based
  StepLabel label;
  std::string successor;  // rendered choreography or network
  std::vector<std::pair<std::string, Value>> state;
  std::optional<std::size_t> lane_depth;  // receiver's lane after ComS/ComR on networks
};

struct Trace {
  std::vector<TraceEntry> entries;
  // terminated | budget | stopped | error | stuck for choreographies;
  // terminated | orphaned-messages | deadlocked | budget | stopped | error
  // for networks.
  std::string outcome;
  std::string error;
};

struct ChorRun {
  Trace trace;
  Configuration final;
};

struct NetRun {
  Trace trace;
  Network final;
};

ChorRun run_sync(const Configuration& cfg, Scheduler& sched, std::size_t max_steps);
ChorRun run_async(const Configuration& cfg, Scheduler& sched, std::size_t max_steps);
ChorRun run_chor(const Configuration& cfg, Mode mode, Scheduler& sched, std::size_t max_steps);

NetRun simulate(const Network& n, Mode mode, Scheduler& sched, std::size_t max_steps);

// "#3 ComR p->q v=1 tag=#0 :: r.2 -> s {p=0, q=1, r=0, s=0}"
std::string format_text(const TraceEntry& e);
// {"index":3,"rule":"ComR","subjects":["p","q"],"value":1,"tag":0,"state":{...}}
std::string format_record(const TraceEntry& e);

}  // namespace chor
