#pragma once

// Deterministic point sampling and the point-parallel map used by suites.

#include <cstdint>
#include <exception>
#include <random>
#include <vector>

#include "tw/geometry.hpp"

namespace tw {

// Uniform doubles in [0, 1) from the top 53 bits of mt19937_64, so streams
// are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

// `count` admissible points of the chart (box margin and exclusion set
// respected). Throws NumericError when rejection sampling stalls.
std::vector<Point4> sample_points(const ChartDomain& chart, int count, std::uint64_t seed);

enum class Execution { serial, parallel };

// out[i] = fn(i) for i in [0, n). The parallel variant uses OpenMP with a
// static schedule; results are stored by index, so reductions performed
// afterwards in index order are identical for both variants.
template <class Fn>
auto map_points(int n, Fn fn, Execution mode = Execution::parallel)
    -> std::vector<decltype(fn(0))> {
  std::vector<decltype(fn(0))> out(n);
  if (mode == Execution::serial) {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  // The lowest failing index wins, so errors do not depend on scheduling.
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace tw
