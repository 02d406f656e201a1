#pragma once

#include <span>
#include <vector>

#include "swopt/heat.hpp"
#include "swopt/mesh.hpp"
#include "swopt/switching.hpp"
#include "swopt/time_mesh.hpp"

namespace swopt {

/// Tracking data: nodal desired state per time node, Tikhonov weight, and
/// the reference switching times.
struct TrackingObjective {
  std::vector<std::vector<double>> y_desired;  // size steps + 1
  double alpha = 0.0;
  std::vector<double> tau_d;
};

/// Fully assembled optimization problem over the switching times.
struct Problem {
  FemMatrices fem;
  TimeMesh time_mesh;
  FormPattern pattern;
  std::vector<std::vector<double>> slab_loads;  // M-weighted, may be empty
  std::vector<double> y0;
  Nonlinearity f;
  TrackingObjective objective;
  double cg_tol = 1e-12;

  double horizon() const { return time_mesh.horizon(); }
  int n_switch() const { return pattern.n_switch; }
};

/// Reduced objective
///   J(tau) = 1/2 |y(tau) - y_d|^2_{L2(0,T;L2)} + alpha/2 |tau - tau_d|^2
/// with the state-error norm integrated exactly for the piecewise-linear
/// in-time interpolants:  sum_i dt_i/3 (e_{i-1} M e_{i-1} + e_{i-1} M e_i
/// + e_i M e_i) with e_i = y_i - y_d(t_i).
double objective(std::span<const double> tau, const Problem& prob);

double objective_of_state(const Trajectory& y, std::span<const double> tau,
                          const Problem& prob);

/// Exact gradient of the discrete objective: forward solve, adjoint solve
/// against the quadrature-weighted tracking residuals, then per-slab pairing
/// with the slab-weight derivatives, plus alpha (tau - tau_d).
std::vector<double> gradient(std::span<const double> tau, const Problem& prob);

/// Central finite differences of the objective (independent check).
std::vector<double> fd_gradient(std::span<const double> tau,
                                const Problem& prob, double step);

/// Norm of the fixed-point defect  | P(tau - grad/L) - tau |_2.
double stationarity_residual(std::span<const double> tau, const Problem& prob,
                             double L);

/// Cross-check assembly of the gradient organized by components: for each
/// switching time, the signed pairing of psi with the adjoint sampled at
/// tau_j through the slab hat (the interpolation convention induced by the
/// slab-averaged forcing), plus the Tikhonov part. Agrees with gradient()
/// to rounding.
std::vector<double> gradient_adjoint_pairing(std::span<const double> tau,
                                             const Problem& prob);

/// Search direction used to drive the optimizer: the signed pairing of psi
/// with the piecewise-linear-in-time interpolant of the adjoint, clamped
/// into [0, T], plus the Tikhonov part. This realizes the continuous
/// gradient formula on the discrete adjoint. It differs from gradient() by
/// O(dt), and unlike it does not degenerate on the time lattice: the exact
/// derivative of the slab-averaged forcing vanishes whenever a switching
/// time sits on a mesh node (the hats are zero there), which would freeze
/// mesh-aligned starting points.
std::vector<double> gradient_interpolated_adjoint(std::span<const double> tau,
                                                  const Problem& prob);

/// Per-step adjoint loads of the tracking term (the derivative of the
/// quadrature with respect to y_1..y_k). Exposed for the adjoint tests.
std::vector<std::vector<double>> tracking_adjoint_loads(const Trajectory& y,
                                                        const Problem& prob);

}  // namespace swopt
