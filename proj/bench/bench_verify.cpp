// Times each theorem on the default corpus with the parallel and the serial
// verifier, and checks that both produce the same report.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "chor/harness.hpp"

using namespace chor;

namespace {

template <class F>
double seconds(F f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CorpusSpec spec;
  if (argc > 1) spec.count = std::stoul(argv[1]);
  auto corpus = generate_corpus(spec);
  Bounds b;
  std::printf("%zu programs, %d threads\n", corpus.size(), omp_get_max_threads());
  std::printf("%-16s %10s %10s %8s %s\n", "theorem", "serial s", "parallel s", "speedup", "same");
  double ts = 0, tp = 0;
  bool all_same = true;
  for (const auto& id : theorem_ids()) {
    TheoremReport rs, rp;
    double s = seconds([&] { rs = verify_serial(id, corpus, b); });
    double p = seconds([&] { rp = verify(id, corpus, b); });
    bool same = report_json({rs}) == report_json({rp});
    all_same = all_same && same;
    ts += s;
    tp += p;
    std::printf("%-16s %10.3f %10.3f %8.2f %s\n", id.c_str(), s, p, p > 0 ? s / p : 0.0, same ? "yes" : "NO");
  }
  std::printf("%-16s %10.3f %10.3f %8.2f\n", "total", ts, tp, tp > 0 ? ts / tp : 0.0);
  return all_same ? 0 : 1;
}
