#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swopt/mesh.hpp"
#include "swopt/switching.hpp"
#include "swopt/time_mesh.hpp"

namespace swopt {

/// Pointwise nonlinearity f(y) with bounded derivative, applied to nodal
/// coefficients of the previous time step (semi-implicit treatment).
struct Nonlinearity {
  enum class Kind { zero, sine, arctan };
  Kind kind = Kind::zero;

  double value(double y) const;
  double derivative(double y) const;
  bool is_zero() const { return kind == Kind::zero; }

  static Nonlinearity from_name(const std::string& name);
  const char* name() const;
};

/// Implicit Euler solve of
///   M (y_i - y_{i-1}) / dt_i + A y_i + M f(y_{i-1}) = s_i(tau) M psi + b_i
/// where s_i is the slab-averaged switching multiplier and b_i the
/// pre-assembled (already M-weighted) per-slab load. slab_loads may be empty
/// for zero extra forcing.
Trajectory forward_solve(std::span<const double> tau,
                         const FormPattern& pattern,
                         const std::vector<std::vector<double>>& slab_loads,
                         std::span<const double> y0, const FemMatrices& fem,
                         const TimeMesh& tm, const Nonlinearity& f,
                         double cg_tol = 1e-12);

/// Exact transpose of the linearized forward map: given per-step loads
/// g_1..g_k (dual pairing with y_1..y_k), returns multipliers p_1..p_k stored
/// as values[i-1] = p_i with values[k] = 0, matching the terminal condition
/// of the continuous adjoint.
Trajectory adjoint_solve(const Trajectory& state,
                         const std::vector<std::vector<double>>& loads,
                         const FemMatrices& fem, const TimeMesh& tm,
                         const Nonlinearity& f, double cg_tol = 1e-12);

/// Directional derivative of the forward map with respect to the per-step
/// loads: perturbations dr_1..dr_k produce dy with dy_0 = 0. Used by the
/// transpose-identity check of adjoint_solve.
Trajectory linearized_forward(const Trajectory& state,
                              const std::vector<std::vector<double>>& dr,
                              const FemMatrices& fem, const TimeMesh& tm,
                              const Nonlinearity& f, double cg_tol = 1e-12);

/// Piecewise-linear-in-time evaluation of a trajectory with the argument
/// clamped into [0, T] (constant continuation outside the horizon).
std::vector<double> evaluate_adjoint_at(const Trajectory& traj,
                                        const TimeMesh& tm, double t);

/// Text dump: one line per time step, space-separated nodal values.
void dump_trajectory(std::ostream& os, const Trajectory& traj);

}  // namespace swopt
