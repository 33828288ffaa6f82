// chor: check, run, project, simulate and verify choreographies.
//
// Exit codes: 0 ok, 1 parse error, 2 not projectable, 3 ill-formed,
// 4 verification failure or runtime error, 64 usage.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chor/async.hpp"
#include "chor/epp.hpp"
#include "chor/harness.hpp"
#include "chor/precongruence.hpp"
#include "chor/processes.hpp"
#include "chor/run.hpp"
#include "chor/syntax.hpp"

using namespace chor;

namespace {

enum Exit { kOk = 0, kParse = 1, kNotProjectable = 2, kIllFormed = 3, kFailure = 4, kUsage = 64 };

struct Exited {
  int code;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    throw Exited{kUsage};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Chor load_chor(const std::string& path) {
  try {
    return parse_choreography(slurp(path));
  } catch (const SyntaxError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    throw Exited{kParse};
  }
}

Network load_network(const std::string& path) {
  try {
    return parse_network(slurp(path));
  } catch (const SyntaxError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    throw Exited{kParse};
  }
}

// "p=1,q=true"; processes not listed start at 0.
GlobalState initial_state(const Chor& c, const std::string& spec) {
  GlobalState s = GlobalState::uniform(pn(c), Value::integer(0));
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "bad --state entry '" << item << "'\n";
      throw Exited{kUsage};
    }
    try {
      s = s.updated(ProcessName(item.substr(0, eq)), parse_value(item.substr(eq + 1)));
    } catch (const SyntaxError& e) {
      std::cerr << "bad --state value: " << e.what() << "\n";
      throw Exited{kUsage};
    }
  }
  return s;
}

Mode mode_of(const std::string& m) { return m == "async" ? Mode::Async : Mode::Sync; }

Scheduler interactive() {
  return Scheduler::custom([](const std::vector<StepLabel>& options) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < options.size(); ++i)
      std::cout << "  [" << i + 1 << "] " << options[i].signature() << "\n";
    for (;;) {
      std::cout << "choose (1-" << options.size() << ", q to stop): " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line) || line == "q") return std::nullopt;
      try {
        std::size_t k = std::stoul(line);
        if (k >= 1 && k <= options.size()) return k - 1;
      } catch (const std::exception&) {
      }
    }
  });
}

struct RunFlags {
  std::string mode = "sync";
  std::string scheduler = "leftmost";
  std::uint64_t seed = 0;
  std::size_t steps = 1000;
  std::string trace = "text";
  std::vector<std::string> script;
  bool interactive = false;
};

Scheduler make_scheduler(const RunFlags& f) {
  if (f.interactive) return interactive();
  if (f.scheduler == "random") return Scheduler::random(f.seed);
  if (f.scheduler == "script") return Scheduler::script(f.script);
  return Scheduler::leftmost();
}

void print_trace(const Trace& t, const std::string& fmt) {
  for (const auto& e : t.entries) std::cout << (fmt == "records" ? format_record(e) : format_text(e)) << "\n";
  if (!t.error.empty()) std::cout << "error: " << t.error << "\n";
  std::cout << "outcome: " << t.outcome << "\n";
}

// Runtime choreographies must be well-formed; returns the diagnosis otherwise.
int require_well_formed(const Chor& c) {
  if (!has_runtime_terms(c)) return kOk;
  WellFormedness w = well_formed(c);
  if (w.ok) return kOk;
  std::cerr << "ill-formed: " << w.diagnosis << "\n";
  return kIllFormed;
}

int cmd_check(const std::string& path, bool canonical) {
  Chor c = load_chor(path);
  if (int code = require_well_formed(c)) return code;
  std::cout << "well-formed: yes\n";
  Chor target = has_runtime_terms(c) ? well_formed(c).canonical : c;
  try {
    for (const auto& p : pn(target)) project_behaviour(target, p);
  } catch (const NotProjectable& e) {
    std::cerr << "not projectable: " << e.what() << "\n";
    return kNotProjectable;
  }
  std::cout << "projectable: yes\n";
  if (canonical) std::cout << "canonical: " << render(normal_form(target)) << "\n";
  return kOk;
}

int cmd_run(const std::string& path, const RunFlags& f, const std::string& state) {
  Chor c = load_chor(path);
  if (has_runtime_terms(c) && f.mode == "sync") {
    std::cerr << "ill-formed: runtime terms need --mode async\n";
    return kIllFormed;
  }
  if (int code = require_well_formed(c)) return code;
  Scheduler s = make_scheduler(f);
  ChorRun run = run_chor({c, initial_state(c, state)}, mode_of(f.mode), s, f.steps);
  print_trace(run.trace, f.trace);
  return run.trace.outcome == "error" || run.trace.outcome == "stuck" ? kFailure : kOk;
}

int cmd_project(const std::string& path, const std::string& mode, const std::string& out,
                const std::string& state) {
  Chor c = load_chor(path);
  Network n;
  try {
    GlobalState s = initial_state(c, state);
    if (mode == "async") {
      n = epp_async(c, s);
    } else {
      if (has_runtime_terms(c)) {
        std::cerr << "ill-formed: runtime terms need --mode async\n";
        return kIllFormed;
      }
      n = epp_sync(c, s);
    }
  } catch (const IllFormed& e) {
    std::cerr << "ill-formed: " << e.what() << "\n";
    return kIllFormed;
  } catch (const NotProjectable& e) {
    std::cerr << "not projectable: " << e.what() << "\n";
    return kNotProjectable;
  }
  std::string text = render(n) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(out);
    o << text;
  }
  return kOk;
}

int cmd_simulate(const std::string& path, const RunFlags& f) {
  Network n = load_network(path);
  Scheduler s = make_scheduler(f);
  NetRun run = simulate(n, mode_of(f.mode), s, f.steps);
  print_trace(run.trace, f.trace);
  return run.trace.outcome == "error" ? kFailure : kOk;
}

int cmd_verify(const std::string& theorem, std::uint64_t seed, const Bounds& b, std::size_t count,
               const std::string& file, const std::string& report, bool serial) {
  std::vector<Program> corpus;
  if (!file.empty()) {
    Chor c = load_chor(file);
    std::map<ProcessName, Value> cells;
    int i = 0;
    for (const auto& p : pn(c)) cells.emplace(p, Value::integer(i++));
    if (!projectable(c)) {
      std::cerr << "not projectable\n";
      return kNotProjectable;
    }
    corpus.push_back({file, c, GlobalState(cells)});
  } else {
    CorpusSpec spec;
    spec.seed = seed;
    spec.count = count;
    corpus = generate_corpus(spec);
  }
  std::vector<std::string> ids = theorem == "all" ? theorem_ids() : std::vector<std::string>{theorem};
  std::vector<TheoremReport> reports;
  for (const auto& id : ids) reports.push_back(serial ? verify_serial(id, corpus, b) : verify(id, corpus, b));
  std::cout << report_table(reports);
  if (!report.empty()) {
    std::ofstream o(report);
    o << report_json(reports) << "\n";
  }
  bool ok = std::all_of(reports.begin(), reports.end(),
                        [](const TheoremReport& r) { return r.verdict == Verdict::Pass; });
  return ok ? kOk : kFailure;
}

void run_options(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--mode", f.mode, "sync or async")->check(CLI::IsMember({"sync", "async"}));
  cmd->add_option("--scheduler", f.scheduler, "leftmost, random or script")
      ->check(CLI::IsMember({"leftmost", "random", "script"}));
  cmd->add_option("--seed", f.seed, "seed for the random scheduler");
  cmd->add_option("--steps", f.steps, "step budget");
  cmd->add_option("--trace", f.trace, "text or records")->check(CLI::IsMember({"text", "records"}));
  cmd->add_option("--script", f.script, "steps for the script scheduler: 1-based indices or 'Rule p->q'")
      ->delimiter(',');
  cmd->add_flag("--interactive", f.interactive, "choose each step from the terminal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Choreographies: checking, execution, projection and verification"};
  app.require_subcommand(1);

  std::string path, out, state, report, file, theorem = "all", mode = "sync";
  bool canonical = false, serial = false;
  std::uint64_t corpus_seed = 42;
  Bounds bounds;
  std::size_t count = 60;
  RunFlags run_flags, sim_flags;

  auto* check = app.add_subcommand("check", "parse, check well-formedness and projectability");
  check->add_option("path", path, ".mc file")->required();
  check->add_flag("--canonical", canonical, "print the canonical form");

  auto* run = app.add_subcommand("run", "execute a choreography");
  run->add_option("path", path, ".mc file")->required();
  run->add_option("--state", state, "initial cells, e.g. p=1,q=2 (default 0)");
  run_options(run, run_flags);

  auto* project = app.add_subcommand("project", "endpoint projection to a network");
  project->add_option("path", path, ".mc file")->required();
  project->add_option("--mode", mode, "sync or async")->check(CLI::IsMember({"sync", "async"}));
  project->add_option("--out", out, "output .sp file (default stdout)");
  project->add_option("--state", state, "initial cells, e.g. p=1,q=2 (default 0)");

  auto* sim = app.add_subcommand("simulate", "execute a network");
  sim->add_option("path", path, ".sp file")->required();
  run_options(sim, sim_flags);

  auto* verify = app.add_subcommand("verify", "check the theorems on a corpus");
  std::vector<std::string> choices{"all"};
  for (const auto& id : theorem_ids()) choices.push_back(id);
  verify->add_option("--theorem", theorem, "theorem id")->check(CLI::IsMember(choices));
  verify->add_option("--corpus-seed", corpus_seed, "corpus seed");
  verify->add_option("--corpus-size", count, "number of programs");
  verify->add_option("--depth", bounds.depth, "exploration depth");
  verify->add_option("--join-depth", bounds.join_depth, "steps allowed to reach a common state (t6)");
  verify->add_option("--cap", bounds.cap, "state cap per program");
  verify->add_option("--file", file, "check a single .mc file instead of the corpus");
  verify->add_option("--report", report, "write JSON records to this file");
  verify->add_flag("--serial", serial, "check programs one after the other");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(path, canonical);
    if (*run) return cmd_run(path, run_flags, state);
    if (*project) return cmd_project(path, mode, out, state);
    if (*sim) return cmd_simulate(path, sim_flags);
    if (*verify) return cmd_verify(theorem, corpus_seed, bounds, count, file, report, serial);
  } catch (const Exited& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
