#include "swopt/heat.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "swopt/cg.hpp"

namespace swopt {

double Nonlinearity::value(double y) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::sine: return std::sin(y);
    case Kind::arctan: return std::atan(y);
  }
  return 0.0;
}

double Nonlinearity::derivative(double y) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::sine: return std::cos(y);
    case Kind::arctan: return 1.0 / (1.0 + y * y);
  }
  return 0.0;
}

Nonlinearity Nonlinearity::from_name(const std::string& name) {
  if (name == "zero") return {Kind::zero};
  if (name == "sin") return {Kind::sine};
  if (name == "arctan") return {Kind::arctan};
  throw std::invalid_argument("unknown nonlinearity: " + name);
}

const char* Nonlinearity::name() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::sine: return "sin";
    case Kind::arctan: return "arctan";
  }
  return "zero";
}

namespace {

void check_loads(const std::vector<std::vector<double>>& loads, int steps,
                 int dofs, const char* what) {
  if (loads.empty()) return;
  if (static_cast<int>(loads.size()) != steps) {
    throw std::invalid_argument(std::string(what) + ": need one load per step");
  }
  for (const auto& v : loads) {
    if (static_cast<int>(v.size()) != dofs) {
      throw std::invalid_argument(std::string(what) + ": load dimension");
    }
  }
}

// Stepping matrix M / dt + A with its cached Jacobi preconditioner. Uniform
// meshes keep it constant across steps; rebuild() re-assembles in place when
// the step width changes. The JacobiCg member points at the matrix member,
// so the struct is pinned in memory (no copy or move).
class Stepper {
 public:
  Stepper(const FemMatrices& fem, double dt)
      : fem_(&fem),
        dt_(dt),
        system_(csr_add_scaled(fem.stiffness, 1.0 / dt, fem.mass)),
        cg_(system_) {}
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  void rebuild(double dt) {
    if (dt == dt_) return;
    dt_ = dt;
    system_ = csr_add_scaled(fem_->stiffness, 1.0 / dt, fem_->mass);
    cg_ = JacobiCg(system_);
  }

  const JacobiCg& cg() const { return cg_; }

 private:
  const FemMatrices* fem_;
  double dt_;
  CsrMatrix system_;
  JacobiCg cg_;
};

// Linear extrapolation of the previous two iterates as CG warm start.
void extrapolate(const std::vector<double>& prev2,
                 const std::vector<double>& prev1, std::vector<double>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 2.0 * prev1[i] - prev2[i];
  }
}

}  // namespace

Trajectory forward_solve(std::span<const double> tau,
                         const FormPattern& pattern,
                         const std::vector<std::vector<double>>& slab_loads,
                         std::span<const double> y0, const FemMatrices& fem,
                         const TimeMesh& tm, const Nonlinearity& f,
                         double cg_tol) {
  const int dofs = fem.mass.n_rows;
  const int k = tm.steps();
  if (static_cast<int>(y0.size()) != dofs) {
    throw std::invalid_argument("forward_solve: y0 dimension");
  }
  if (static_cast<int>(pattern.psi_nodal.size()) != dofs) {
    throw std::invalid_argument("forward_solve: psi dimension");
  }
  check_loads(slab_loads, k, dofs, "forward_solve");

  Stepper stepper(fem, tm.dt[0]);

  const std::vector<double> mass_psi = spmv(fem.mass, pattern.psi_nodal);

  Trajectory traj;
  traj.values.resize(k + 1);
  traj.values[0].assign(y0.begin(), y0.end());

  std::vector<double> rhs(dofs), my(dofs), fy(dofs);
  for (int i = 1; i <= k; ++i) {
    const double dt = tm.dt[i - 1];
    stepper.rebuild(dt);
    const auto& prev = traj.values[i - 1];
    spmv_into(fem.mass, prev, my);
    const double weight = slab_weight(tau, tm, i - 1);
    for (int d = 0; d < dofs; ++d) {
      rhs[d] = my[d] / dt + weight * mass_psi[d];
    }
    if (!slab_loads.empty()) {
      for (int d = 0; d < dofs; ++d) rhs[d] += slab_loads[i - 1][d];
    }
    if (!f.is_zero()) {
      for (int d = 0; d < dofs; ++d) fy[d] = f.value(prev[d]);
      spmv_into(fem.mass, fy, my);
      for (int d = 0; d < dofs; ++d) rhs[d] -= my[d];
    }
    auto& y = traj.values[i];
    if (i >= 2) {
      y.resize(dofs);
      extrapolate(traj.values[i - 2], prev, y);
    } else {
      y = prev;
    }
    stepper.cg().solve(rhs, y, cg_tol);
  }
  return traj;
}

Trajectory adjoint_solve(const Trajectory& state,
                         const std::vector<std::vector<double>>& loads,
                         const FemMatrices& fem, const TimeMesh& tm,
                         const Nonlinearity& f, double cg_tol) {
  const int dofs = fem.mass.n_rows;
  const int k = tm.steps();
  if (state.steps() != k) {
    throw std::invalid_argument("adjoint_solve: state/mesh step mismatch");
  }
  check_loads(loads, k, dofs, "adjoint_solve");

  Stepper stepper(fem, tm.dt[k - 1]);

  Trajectory adj;
  adj.values.assign(k + 1, std::vector<double>(dofs, 0.0));

  // Backward recursion for the multiplier p_i of step i:
  //   (M / dt_i + A) p_i = g_i + M p_{i+1} / dt_{i+1}
  //                        - diag(f'(y_i)) M p_{i+1},    p_{k+1} = 0,
  // the exact transpose of the semi-implicit forward linearization.
  std::vector<double> rhs(dofs), mp(dofs);
  for (int i = k; i >= 1; --i) {
    const double dt = tm.dt[i - 1];
    stepper.rebuild(dt);
    if (loads.empty()) {
      std::fill(rhs.begin(), rhs.end(), 0.0);
    } else {
      rhs = loads[i - 1];
    }
    if (i < k) {
      const auto& p_next = adj.values[i];  // p_{i+1}
      spmv_into(fem.mass, p_next, mp);
      const double dt_next = tm.dt[i];
      if (f.is_zero()) {
        for (int d = 0; d < dofs; ++d) rhs[d] += mp[d] / dt_next;
      } else {
        const auto& y_i = state.values[i];
        for (int d = 0; d < dofs; ++d) {
          rhs[d] += mp[d] / dt_next - f.derivative(y_i[d]) * mp[d];
        }
      }
    }
    auto& p = adj.values[i - 1];
    if (i <= k - 2) {
      extrapolate(adj.values[i + 1], adj.values[i], p);
    } else if (i == k - 1) {
      p = adj.values[i];
    }
    stepper.cg().solve(rhs, p, cg_tol);
  }
  return adj;
}

Trajectory linearized_forward(const Trajectory& state,
                              const std::vector<std::vector<double>>& dr,
                              const FemMatrices& fem, const TimeMesh& tm,
                              const Nonlinearity& f, double cg_tol) {
  const int dofs = fem.mass.n_rows;
  const int k = tm.steps();
  if (state.steps() != k) {
    throw std::invalid_argument("linearized_forward: step mismatch");
  }
  check_loads(dr, k, dofs, "linearized_forward");

  Stepper stepper(fem, tm.dt[0]);

  Trajectory lin;
  lin.values.assign(k + 1, std::vector<double>(dofs, 0.0));

  std::vector<double> rhs(dofs), tmp(dofs);
  for (int i = 1; i <= k; ++i) {
    const double dt = tm.dt[i - 1];
    stepper.rebuild(dt);
    const auto& prev = lin.values[i - 1];
    if (f.is_zero()) {
      spmv_into(fem.mass, prev, tmp);
      for (int d = 0; d < dofs; ++d) rhs[d] = tmp[d] / dt;
    } else {
      const auto& y_prev = state.values[i - 1];
      for (int d = 0; d < dofs; ++d) {
        tmp[d] = f.derivative(y_prev[d]) * prev[d];
      }
      spmv_into(fem.mass, tmp, rhs);
      spmv_into(fem.mass, prev, tmp);
      for (int d = 0; d < dofs; ++d) rhs[d] = tmp[d] / dt - rhs[d];
    }
    if (!dr.empty()) {
      for (int d = 0; d < dofs; ++d) rhs[d] += dr[i - 1][d];
    }
    auto& dy = lin.values[i];
    if (i >= 2) {
      extrapolate(lin.values[i - 2], lin.values[i - 1], dy);
    } else {
      dy = prev;
    }
    stepper.cg().solve(rhs, dy, cg_tol);
  }
  return lin;
}

std::vector<double> evaluate_adjoint_at(const Trajectory& traj,
                                        const TimeMesh& tm, double t) {
  const double clamped = std::clamp(t, 0.0, tm.horizon());
  const auto it = std::upper_bound(tm.times.begin(), tm.times.end(), clamped);
  int i = static_cast<int>(it - tm.times.begin()) - 1;
  i = std::clamp(i, 0, tm.steps() - 1);
  const double theta = (clamped - tm.times[i]) / tm.dt[i];
  const auto& a = traj.values[i];
  const auto& b = traj.values[i + 1];
  std::vector<double> out(a.size());
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d] = (1.0 - theta) * a[d] + theta * b[d];
  }
  return out;
}

void dump_trajectory(std::ostream& os, const Trajectory& traj) {
  os.precision(17);
  for (const auto& row : traj.values) {
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (d) os << ' ';
      os << row[d];
    }
    os << '\n';
  }
}

}  // namespace swopt
