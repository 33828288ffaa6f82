#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chor/choreography.hpp"
#include "chor/network.hpp"
#include "chor/precongruence.hpp"
#include "chor/semantics.hpp"

namespace chor {

struct CorpusSpec {
  unsigned max_procs = 4;    // at most 4
  unsigned max_actions = 8;  // at most 8
  unsigned recursion = 1;    // 0 or 1 definitions per program
  bool conditionals = true;
  std::uint64_t seed = 42;
  std::size_t count = 60;
};

struct Program {
  std::string id;
  Chor chor;
  GlobalState state;
};

// Deterministic for a fixed spec. Every member is runtime-free and projectable.
std::vector<Program> generate_corpus(const CorpusSpec& spec);

struct CorpusStats {
  std::size_t programs = 0;
  std::size_t with_conditional = 0;
  std::size_t with_loop = 0;
  std::size_t with_dead_def = 0;
  std::size_t with_chain = 0;  // consecutive actions sharing a process
};

CorpusStats corpus_stats(const std::vector<Program>& corpus);

// Normalizes both networks, then compares states and queues exactly and
// behaviours up to `unfold_budget` unfoldings per side.
Answer network_equiv(const Network& a, const Network& b, unsigned unfold_budget);

enum class Verdict : std::uint8_t { Pass, Fail, BudgetExceeded };

const char* verdict_name(Verdict v);

// Steps are label signatures from the program's initial configuration, so a
// counterexample replays through a script scheduler.
struct Counterexample {
  std::string program;
  std::string mode;  // sync | async
  std::vector<std::string> path;
  std::string configuration;
  std::string detail;
};

struct ProgramResult {
  std::string program;
  Verdict verdict = Verdict::Pass;
  std::size_t states = 0;
  std::size_t checks = 0;
  std::optional<Counterexample> counterexample;
};

struct Bounds {
  unsigned depth = 12;
  std::size_t cap = 50000;
  unsigned join_depth = 48;
  unsigned unfold_budget = 2;
  unsigned context_depth = 3;
};

ProgramResult check_deadlock_freedom(const Program& p, Mode mode, const Bounds& b);
ProgramResult check_epp_sync(const Program& p, const Bounds& b);
ProgramResult check_epp_async(const Program& p, const Bounds& b);
ProgramResult check_async_equivalence(const Program& p, const Bounds& b);
ProgramResult check_diamond(const Program& p, const Bounds& b);
ProgramResult check_sp_asp_simulation(const std::string& id, const Network& n, const Bounds& b);
ProgramResult check_abstract_async(const Program& p, const Bounds& b);
ProgramResult check_wf_preservation(const Program& p, const Bounds& b);

struct TheoremReport {
  std::string theorem;
  std::size_t corpus_size = 0;
  std::size_t states = 0;
  std::size_t checks = 0;  // individual obligations discharged
  Verdict verdict = Verdict::Pass;
  std::vector<ProgramResult> programs;  // in corpus order
  std::optional<Counterexample> counterexample;
};

// t1, t5, t2, t8, t6, diamond, t7, abstract-async, wf
const std::vector<std::string>& theorem_ids();
bool known_theorem(const std::string& id);

ProgramResult check_program(const std::string& theorem, const Program& p, const Bounds& b);

// Corpus members are checked in parallel; results keep corpus order.
TheoremReport verify(const std::string& theorem, const std::vector<Program>& corpus, const Bounds& b);
// Same, one member after the other. Reference for the parallel version.
TheoremReport verify_serial(const std::string& theorem, const std::vector<Program>& corpus,
                            const Bounds& b);

std::string report_json(const std::vector<TheoremReport>& reports);
std::string report_table(const std::vector<TheoremReport>& reports);

// Follows label signatures from `cfg`; nullopt if a step is not enabled.
std::optional<Configuration> replay(const Configuration& cfg, Mode mode,
                                    const std::vector<std::string>& path);

}  // namespace chor
