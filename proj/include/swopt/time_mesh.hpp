#pragma once

#include <vector>

namespace swopt {

/// Strictly increasing time grid t_0 = 0 < ... < t_k = T with per-step
/// widths. All formulas work for non-uniform grids, but the factory below
/// produces the equidistant mesh the experiments use.
struct TimeMesh {
  std::vector<double> times;  // size k + 1
  std::vector<double> dt;     // size k, dt[i] = times[i+1] - times[i]

  int steps() const { return static_cast<int>(dt.size()); }
  double horizon() const { return times.back(); }
  double midpoint(int slab) const {
    return 0.5 * (times[slab] + times[slab + 1]);
  }

  static TimeMesh uniform(double horizon, int steps);
};

/// Time-indexed nodal coefficient vectors (state, adjoint, or a
/// linearization), values[i] belonging to times[i].
struct Trajectory {
  std::vector<std::vector<double>> values;

  int steps() const { return static_cast<int>(values.size()) - 1; }
};

}  // namespace swopt
