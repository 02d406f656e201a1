#pragma once

#include <span>
#include <vector>

#include "swopt/time_mesh.hpp"

namespace swopt {

/// Alternating on/off source pattern: the form function psi is active on the
/// intervals [tau_l, tau_{l+1}) for odd l (1-based) and off in between, so n
/// switching times toggle the source n times.
struct FormPattern {
  int n_switch = 0;                // number of switching times
  std::vector<double> psi_nodal;   // interior-DOF coefficients of psi
};

/// Modified interval indicator: 1 for a <= t < b, -1 for b < t <= a, else 0.
/// The sign on reversed intervals is what makes the switching-time-to-control
/// map differentiable in the averaged sense used below.
int chi_bar(double a, double b, double t);

/// Signed multiplier c(t) = sum over odd l of chi_bar(tau_l, tau_{l+1}, t).
/// On the ordered feasible set this is the plain 0/1 on-off indicator.
int control_scalar(std::span<const double> tau, double t);

// The per-slab averaging hat v_i vanishes at both slab ends and peaks at the
// midpoint; its integral over the slab is dt_i / 2. hat_value evaluates v_i
// (zero outside the slab); hat_integral is the running integral from the
// left slab end with the argument clamped into the slab, which turns every
// chi_bar integral into a difference of two evaluations.
double hat_value(double t_lo, double t_hi, double x);
double hat_integral(double t_lo, double t_hi, double x);

/// Local average of c(t) against the hat of slab i:
/// integral(c * v_i) / integral(v_i), in closed form.
double slab_weight(std::span<const double> tau, const TimeMesh& tm, int slab);

/// Exact partial derivative of slab_weight with respect to tau[j]
/// (0-based j). Zero whenever tau[j] lies outside the open slab.
double slab_weight_derivative(std::span<const double> tau, const TimeMesh& tm,
                              int slab, int j);

/// slab_weight for every slab of the mesh.
std::vector<double> slab_weights(std::span<const double> tau,
                                 const TimeMesh& tm);

/// Sign with which tau[j] (0-based) enters the active intervals: -1 for a
/// lower endpoint (odd 1-based index), +1 for an upper endpoint. Zero when
/// the alternating pattern leaves tau[j] unused (last time of an odd n).
int endpoint_sign(int j, int n);

}  // namespace swopt
