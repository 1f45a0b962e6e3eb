#include "tw/sampling.hpp"

#include "tw/errors.hpp"

namespace tw {

std::vector<Point4> sample_points(const ChartDomain& chart, int count, std::uint64_t seed) {
  if (count < 0) throw ConfigurationError("sample count must be non-negative");
  Rng rng(seed);
  std::vector<Point4> pts;
  pts.reserve(count);
  long attempts = 0;
  while (static_cast<int>(pts.size()) < count) {
    if (++attempts > 1000L * (count + 10))
      throw NumericError("rejection sampling found too few admissible points");
    Point4 x;
    for (int i = 0; i < 4; ++i) x[i] = rng.uniform(chart.box[i][0], chart.box[i][1]);
    if (chart.admits(x)) pts.push_back(x);
  }
  return pts;
}

}  // namespace tw
