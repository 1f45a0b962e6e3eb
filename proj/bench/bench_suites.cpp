// Serial reference vs OpenMP map for the heavier suites.
// Usage: bench_suites [repeats]   (thread count from OMP_NUM_THREADS)

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "tw/report.hpp"

using namespace tw;

namespace {

double seconds(const SuiteConfig& cfg, int repeats, std::string& dump) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) dump = run_suite(cfg).to_json()["checks"].dump();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads %d, repeats %d\n", omp_get_max_threads(), repeats);
  std::printf("%-16s %-22s %10s %10s %8s %s\n", "metric", "suite", "serial_s", "parallel_s",
              "speedup", "same");
  const std::pair<const char*, const char*> cases[] = {
      {"eguchi_hanson", "integrability"}, {"eguchi_hanson", "structure_identities"},
      {"burns", "balanced"},              {"fubini_study", "cone"},
      {"burns", "curvature"},             {"eguchi_hanson", "all"},
  };
  bool all_same = true;
  for (const auto& [metric, suite] : cases) {
    SuiteConfig cfg;
    cfg.metric = metric;
    cfg.suite = suite;
    std::string ds, dp;
    cfg.execution = Execution::serial;
    const double ts = seconds(cfg, repeats, ds);
    cfg.execution = Execution::parallel;
    const double tp = seconds(cfg, repeats, dp);
    all_same = all_same && ds == dp;
    std::printf("%-16s %-22s %10.4f %10.4f %8.2f %s\n", metric, suite, ts, tp, ts / tp,
                ds == dp ? "yes" : "NO");
  }
  return all_same ? 0 : 1;
}
