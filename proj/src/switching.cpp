#include "swopt/switching.hpp"

#include <algorithm>
#include <stdexcept>

namespace swopt {

int chi_bar(double a, double b, double t) {
  if (a <= t && t < b) return 1;
  if (b < t && t <= a) return -1;
  return 0;
}

int control_scalar(std::span<const double> tau, double t) {
  int acc = 0;
  const int n = static_cast<int>(tau.size());
  for (int l = 0; l + 1 < n; l += 2) {
    acc += chi_bar(tau[l], tau[l + 1], t);
  }
  return acc;
}

double hat_value(double t_lo, double t_hi, double x) {
  if (x <= t_lo || x >= t_hi) return 0.0;
  const double width = t_hi - t_lo;
  const double mid = 0.5 * (t_lo + t_hi);
  return x <= mid ? 2.0 * (x - t_lo) / width : 2.0 * (t_hi - x) / width;
}

double hat_integral(double t_lo, double t_hi, double x) {
  const double width = t_hi - t_lo;
  const double mid = 0.5 * (t_lo + t_hi);
  if (x <= t_lo) return 0.0;
  if (x >= t_hi) return 0.5 * width;
  if (x <= mid) {
    const double d = x - t_lo;
    return d * d / width;
  }
  const double d = t_hi - x;
  return 0.5 * width - d * d / width;
}

namespace {

void check_slab(const TimeMesh& tm, int slab) {
  if (slab < 0 || slab >= tm.steps()) {
    throw std::out_of_range("slab index out of range");
  }
}

}  // namespace

double slab_weight(std::span<const double> tau, const TimeMesh& tm, int slab) {
  check_slab(tm, slab);
  const double lo = tm.times[slab];
  const double hi = tm.times[slab + 1];
  // integral(chi_bar(a,b) v) over the slab is the signed difference of the
  // running hat integral, which handles reversed intervals and clamping in
  // one expression.
  double acc = 0.0;
  const int n = static_cast<int>(tau.size());
  for (int l = 0; l + 1 < n; l += 2) {
    acc += hat_integral(lo, hi, tau[l + 1]) - hat_integral(lo, hi, tau[l]);
  }
  return acc / (0.5 * (hi - lo));
}

double slab_weight_derivative(std::span<const double> tau, const TimeMesh& tm,
                              int slab, int j) {
  check_slab(tm, slab);
  const int n = static_cast<int>(tau.size());
  if (j < 0 || j >= n) throw std::out_of_range("switch index out of range");
  const int sign = endpoint_sign(j, n);
  if (sign == 0) return 0.0;
  const double lo = tm.times[slab];
  const double hi = tm.times[slab + 1];
  return sign * hat_value(lo, hi, tau[j]) / (0.5 * (hi - lo));
}

std::vector<double> slab_weights(std::span<const double> tau,
                                 const TimeMesh& tm) {
  std::vector<double> out(tm.steps());
  for (int i = 0; i < tm.steps(); ++i) out[i] = slab_weight(tau, tm, i);
  return out;
}

int endpoint_sign(int j, int n) {
  if (j % 2 == 0) {
    // 1-based odd index: lower endpoint of [tau_j, tau_{j+1}), provided the
    // interval exists.
    return j + 1 < n ? -1 : 0;
  }
  return 1;
}

}  // namespace swopt
