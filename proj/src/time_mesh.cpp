#include "swopt/time_mesh.hpp"

#include <stdexcept>

namespace swopt {

TimeMesh TimeMesh::uniform(double horizon, int steps) {
  if (horizon <= 0.0 || steps < 1) {
    throw std::invalid_argument("TimeMesh::uniform: need horizon > 0, steps >= 1");
  }
  TimeMesh tm;
  tm.times.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    tm.times[i] = horizon * static_cast<double>(i) / steps;
  }
  // One representable width for every slab keeps the stepping matrix
  // bit-identical across steps (a single assembly per trajectory).
  tm.dt.assign(steps, horizon / steps);
  return tm;
}

}  // namespace swopt
