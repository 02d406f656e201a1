#include "swopt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swopt/isotonic.hpp"
#include "swopt/kernels.hpp"

namespace swopt {

namespace {

void check_tau(std::span<const double> tau, const Problem& prob) {
  if (static_cast<int>(tau.size()) != prob.n_switch()) {
    throw std::invalid_argument("tau length does not match the problem");
  }
}

std::vector<double> error_at(const Trajectory& y, const Problem& prob, int i) {
  const auto& yd = prob.objective.y_desired[i];
  std::vector<double> e(y.values[i].size());
  for (std::size_t d = 0; d < e.size(); ++d) {
    e[d] = y.values[i][d] - yd[d];
  }
  return e;
}

double tikhonov(std::span<const double> tau, const Problem& prob) {
  double acc = 0.0;
  for (std::size_t j = 0; j < tau.size(); ++j) {
    const double d = tau[j] - prob.objective.tau_d[j];
    acc += d * d;
  }
  return 0.5 * prob.objective.alpha * acc;
}

}  // namespace

double objective_of_state(const Trajectory& y, std::span<const double> tau,
                          const Problem& prob) {
  const int k = prob.time_mesh.steps();
  std::vector<double> e_prev = error_at(y, prob, 0);
  std::vector<double> me_prev = spmv(prob.fem.mass, e_prev);
  double quad = 0.0;
  for (int i = 1; i <= k; ++i) {
    std::vector<double> e = error_at(y, prob, i);
    std::vector<double> me = spmv(prob.fem.mass, e);
    const double a = kernels::dot(e_prev, me_prev);
    const double c = kernels::dot(e, me);
    const double b = kernels::dot(e_prev, me);
    quad += prob.time_mesh.dt[i - 1] / 3.0 * (a + b + c);
    e_prev = std::move(e);
    me_prev = std::move(me);
  }
  return 0.5 * quad + tikhonov(tau, prob);
}

double objective(std::span<const double> tau, const Problem& prob) {
  check_tau(tau, prob);
  const Trajectory y =
      forward_solve(tau, prob.pattern, prob.slab_loads, prob.y0, prob.fem,
                    prob.time_mesh, prob.f, prob.cg_tol);
  return objective_of_state(y, tau, prob);
}

std::vector<std::vector<double>> tracking_adjoint_loads(const Trajectory& y,
                                                        const Problem& prob) {
  const int k = prob.time_mesh.steps();
  std::vector<std::vector<double>> me(k + 1);
  for (int i = 0; i <= k; ++i) {
    me[i] = spmv(prob.fem.mass, error_at(y, prob, i));
  }
  // d/dy_i of 1/2 sum_l dt_l/3 (e_{l-1} M e_{l-1} + e_{l-1} M e_l + e_l M e_l)
  std::vector<std::vector<double>> loads(k);
  for (int i = 1; i <= k; ++i) {
    const double w_here = prob.time_mesh.dt[i - 1] / 6.0;
    std::vector<double> g(me[i].size(), 0.0);
    for (std::size_t d = 0; d < g.size(); ++d) {
      g[d] = w_here * (me[i - 1][d] + 2.0 * me[i][d]);
    }
    if (i < k) {
      const double w_next = prob.time_mesh.dt[i] / 6.0;
      for (std::size_t d = 0; d < g.size(); ++d) {
        g[d] += w_next * (2.0 * me[i][d] + me[i + 1][d]);
      }
    }
    loads[i - 1] = std::move(g);
  }
  return loads;
}

namespace {

// Shared tail of the gradient assemblies: forward state, adjoint
// multipliers against the tracking loads, and M psi.
struct AdjointData {
  Trajectory p;
  std::vector<double> mass_psi;
};

AdjointData solve_adjoint_chain(std::span<const double> tau,
                                const Problem& prob) {
  const Trajectory y =
      forward_solve(tau, prob.pattern, prob.slab_loads, prob.y0, prob.fem,
                    prob.time_mesh, prob.f, prob.cg_tol);
  const auto loads = tracking_adjoint_loads(y, prob);
  AdjointData data;
  data.p = adjoint_solve(y, loads, prob.fem, prob.time_mesh, prob.f,
                         prob.cg_tol);
  data.mass_psi = spmv(prob.fem.mass, prob.pattern.psi_nodal);
  return data;
}

// (M psi)^T p_i per step multiplier.
std::vector<double> psi_pairings(const AdjointData& data, int steps) {
  std::vector<double> pairings(steps);
  for (int i = 1; i <= steps; ++i) {
    pairings[i - 1] = kernels::dot(data.mass_psi, data.p.values[i - 1]);
  }
  return pairings;
}

}  // namespace

std::vector<double> gradient(std::span<const double> tau,
                             const Problem& prob) {
  check_tau(tau, prob);
  const std::vector<double> pairings =
      psi_pairings(solve_adjoint_chain(tau, prob), prob.time_mesh.steps());
  const int n = prob.n_switch();
  const int k = prob.time_mesh.steps();
  std::vector<double> grad(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
      const double ds = slab_weight_derivative(tau, prob.time_mesh, i, j);
      if (ds != 0.0) acc += ds * pairings[i];
    }
    grad[j] = acc + prob.objective.alpha * (tau[j] - prob.objective.tau_d[j]);
  }
  return grad;
}

std::vector<double> gradient_adjoint_pairing(std::span<const double> tau,
                                             const Problem& prob) {
  check_tau(tau, prob);
  const std::vector<double> pairings =
      psi_pairings(solve_adjoint_chain(tau, prob), prob.time_mesh.steps());
  const TimeMesh& tm = prob.time_mesh;
  const int n = prob.n_switch();
  std::vector<double> grad(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const int sign = endpoint_sign(j, n);
    double pde_part = 0.0;
    if (sign != 0) {
      const double t = std::clamp(tau[j], 0.0, tm.horizon());
      // slab containing t; hats vanish at slab ends so ties are harmless
      const auto it = std::upper_bound(tm.times.begin(), tm.times.end(), t);
      int slab = static_cast<int>(it - tm.times.begin()) - 1;
      slab = std::clamp(slab, 0, tm.steps() - 1);
      const double lo = tm.times[slab];
      const double hi = tm.times[slab + 1];
      const double sample =
          hat_value(lo, hi, t) / (0.5 * (hi - lo)) * pairings[slab];
      pde_part = sign * sample;
    }
    grad[j] =
        pde_part + prob.objective.alpha * (tau[j] - prob.objective.tau_d[j]);
  }
  return grad;
}

std::vector<double> gradient_interpolated_adjoint(std::span<const double> tau,
                                                  const Problem& prob) {
  check_tau(tau, prob);
  const AdjointData data = solve_adjoint_chain(tau, prob);
  const TimeMesh& tm = prob.time_mesh;
  const int k = tm.steps();

  // The step multipliers carry the step width as quadrature weight; divide
  // it out to get nodal samples of the continuous adjoint, terminal zero.
  Trajectory nodal;
  nodal.values.resize(k + 1);
  for (int j = 0; j < k; ++j) {
    nodal.values[j] = data.p.values[j];
    for (double& v : nodal.values[j]) v /= tm.dt[j];
  }
  nodal.values[k].assign(data.mass_psi.size(), 0.0);

  const int n = prob.n_switch();
  std::vector<double> grad(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const int sign = endpoint_sign(j, n);
    double pde_part = 0.0;
    if (sign != 0) {
      const std::vector<double> p_at =
          evaluate_adjoint_at(nodal, tm, tau[j]);
      pde_part = sign * kernels::dot(data.mass_psi, p_at);
    }
    grad[j] =
        pde_part + prob.objective.alpha * (tau[j] - prob.objective.tau_d[j]);
  }
  return grad;
}

std::vector<double> fd_gradient(std::span<const double> tau,
                                const Problem& prob, double step) {
  check_tau(tau, prob);
  if (step <= 0.0) throw std::invalid_argument("fd_gradient: step <= 0");
  const int n = prob.n_switch();
  std::vector<double> grad(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < n; ++j) {
    std::vector<double> t_plus(tau.begin(), tau.end());
    std::vector<double> t_minus(tau.begin(), tau.end());
    t_plus[j] += step;
    t_minus[j] -= step;
    grad[j] =
        (objective(t_plus, prob) - objective(t_minus, prob)) / (2.0 * step);
  }
  return grad;
}

double stationarity_residual(std::span<const double> tau, const Problem& prob,
                             double L) {
  check_tau(tau, prob);
  if (L <= 0.0) throw std::invalid_argument("stationarity_residual: L <= 0");
  const std::vector<double> g = gradient(tau, prob);
  std::vector<double> shifted(tau.begin(), tau.end());
  for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] -= g[j] / L;
  const std::vector<double> projected =
      project_onto_ordered(shifted, prob.horizon());
  double acc = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    const double d = projected[j] - tau[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace swopt
