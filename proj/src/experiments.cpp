#include "swopt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "swopt/isotonic.hpp"

namespace swopt {

ExperimentCase parse_case(const std::string& name) {
  if (name == "i") return ExperimentCase::i;
  if (name == "ii") return ExperimentCase::ii;
  if (name == "iii") return ExperimentCase::iii;
  if (name == "iv") return ExperimentCase::iv;
  throw std::invalid_argument("unknown case: " + name +
                              " (expected i, ii, iii or iv)");
}

const char* to_string(ExperimentCase c) {
  switch (c) {
    case ExperimentCase::i: return "i";
    case ExperimentCase::ii: return "ii";
    case ExperimentCase::iii: return "iii";
    case ExperimentCase::iv: return "iv";
  }
  return "i";
}

double case_alpha(ExperimentCase c) {
  return (c == ExperimentCase::iii || c == ExperimentCase::iv) ? 1e-6 : 0.0;
}

bool case_discrete_exact(ExperimentCase c) {
  return c == ExperimentCase::ii || c == ExperimentCase::iv;
}

Preset desk_preset() { return {"desk", 20, 250, 1e-12}; }
Preset paper_preset() { return {"paper", 40, 1000, 1e-12}; }

std::vector<double> reference_tau_opt() {
  return {0.0, 0.1, 0.15, 0.25, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85};
}

std::array<std::vector<double>, 5> reference_initial_points() {
  return {{{0.05, 0.1, 0.15, 0.25, 0.4, 0.55, 0.65, 0.85, 0.9, 1.0},
           {0.0, 0.1, 0.15, 0.2, 0.55, 0.55, 0.65, 0.85, 0.9, 0.9},
           {0.05, 0.15, 0.15, 0.25, 0.55, 0.6, 0.7, 0.75, 0.8, 0.9},
           {0.05, 0.15, 0.25, 0.3, 0.45, 0.6, 0.7, 0.75, 0.9, 1.0},
           {0.05, 0.15, 0.25, 0.45, 0.6, 0.65, 0.7, 0.75, 0.9, 0.9}}};
}

double psi_field(double x1, double x2) {
  const double d1 = x1 - 0.5;
  const double d2 = x2 - 0.5;
  return 10.0 * std::exp(-2.0 * (d1 * d1 + d2 * d2));
}

double desired_state(double t, double x1, double x2) {
  return t * t * std::sin(std::numbers::pi * x1) *
         std::sin(std::numbers::pi * x2);
}

ProblemSpec spec_for(ExperimentCase c, const Preset& preset) {
  ProblemSpec spec;
  spec.nx = preset.nx;
  spec.time_steps = preset.time_steps;
  spec.cg_tol = preset.cg_tol;
  spec.alpha = case_alpha(c);
  spec.discrete_exact = case_discrete_exact(c);
  return spec;
}

namespace {

// sin(pi x1) sin(pi x2), the spatial factor of the desired state
double sine_field(double x1, double x2) {
  return std::sin(std::numbers::pi * x1) * std::sin(std::numbers::pi * x2);
}

// Exact moments of 1, t, t^2 against the slab hat, normalized by the hat
// integral: 1, the midpoint, and midpoint^2 + width^2 / 24.
double hat_average_t(const TimeMesh& tm, int slab) { return tm.midpoint(slab); }

double hat_average_t2(const TimeMesh& tm, int slab) {
  const double mid = tm.midpoint(slab);
  const double width = tm.times[slab + 1] - tm.times[slab];
  return mid * mid + width * width / 24.0;
}

}  // namespace

std::vector<std::vector<double>> build_forcing_continuous(
    const ProblemSpec& spec, const TriMesh& mesh, const FemMatrices& fem,
    const TimeMesh& tm) {
  const std::vector<double> sine_nodal = interpolate_nodal(mesh, sine_field);
  const std::vector<double> psi_nodal = interpolate_nodal(mesh, psi_field);
  const std::vector<double> mass_sine = spmv(fem.mass, sine_nodal);
  const std::vector<double> mass_psi = spmv(fem.mass, psi_nodal);
  const double pi2 = std::numbers::pi * std::numbers::pi;

  const int k = tm.steps();
  const int dofs = fem.mass.n_rows;
  std::vector<std::vector<double>> loads(k, std::vector<double>(dofs));
  for (int i = 0; i < k; ++i) {
    // slab average of dy_d/dt - Laplace(y_d) = (2t + 2 pi^2 t^2) sine_field
    const double poly =
        2.0 * hat_average_t(tm, i) + 2.0 * pi2 * hat_average_t2(tm, i);
    // minus the switching term at tau_opt
    const double sw = slab_weight(spec.tau_opt, tm, i);
    for (int d = 0; d < dofs; ++d) {
      loads[i][d] = poly * mass_sine[d] - sw * mass_psi[d];
    }
  }
  return loads;
}

std::vector<std::vector<double>> build_forcing_discrete(
    const ProblemSpec& spec, const TriMesh& mesh, const FemMatrices& fem,
    const TimeMesh& tm) {
  const std::vector<double> sine_nodal = interpolate_nodal(mesh, sine_field);
  const std::vector<double> psi_nodal = interpolate_nodal(mesh, psi_field);
  const std::vector<double> mass_sine = spmv(fem.mass, sine_nodal);
  const std::vector<double> stiff_sine = spmv(fem.stiffness, sine_nodal);
  const std::vector<double> mass_psi = spmv(fem.mass, psi_nodal);

  const int k = tm.steps();
  const int dofs = fem.mass.n_rows;
  // Require (M/dt + A) y_i - M y_{i-1}/dt - s_i M psi - b_i + M f(y_{i-1}) = 0
  // at y_i = t_i^2 sine_nodal, which fixes b_i in closed form; the desired
  // state is separable, so only scalar coefficients vary per slab.
  std::vector<double> f_of_yd;
  std::vector<std::vector<double>> loads(k, std::vector<double>(dofs));
  for (int i = 1; i <= k; ++i) {
    const double dt = tm.dt[i - 1];
    const double c_here = tm.times[i] * tm.times[i];
    const double c_prev = tm.times[i - 1] * tm.times[i - 1];
    const double sw = slab_weight(spec.tau_opt, tm, i - 1);
    auto& b = loads[i - 1];
    for (int d = 0; d < dofs; ++d) {
      b[d] = (c_here - c_prev) / dt * mass_sine[d] + c_here * stiff_sine[d] -
             sw * mass_psi[d];
    }
    if (!spec.f.is_zero()) {
      f_of_yd.resize(dofs);
      for (int d = 0; d < dofs; ++d) {
        f_of_yd[d] = spec.f.value(c_prev * sine_nodal[d]);
      }
      const std::vector<double> mf = spmv(fem.mass, f_of_yd);
      for (int d = 0; d < dofs; ++d) b[d] += mf[d];
    }
  }
  return loads;
}

Problem make_problem(const ProblemSpec& spec) {
  const TriMesh mesh = build_mesh(spec.nx);
  Problem prob;
  prob.fem = assemble(mesh);
  prob.time_mesh = TimeMesh::uniform(spec.horizon, spec.time_steps);
  prob.pattern.n_switch = spec.n_switch;
  prob.pattern.psi_nodal = interpolate_nodal(mesh, psi_field);
  prob.slab_loads =
      spec.discrete_exact
          ? build_forcing_discrete(spec, mesh, prob.fem, prob.time_mesh)
          : build_forcing_continuous(spec, mesh, prob.fem, prob.time_mesh);
  prob.y0.assign(prob.fem.mass.n_rows, 0.0);
  prob.f = spec.f;
  prob.cg_tol = spec.cg_tol;

  prob.objective.alpha = spec.alpha;
  prob.objective.tau_d = spec.tau_opt;
  prob.objective.y_desired.resize(spec.time_steps + 1);
  const std::vector<double> sine_nodal = interpolate_nodal(mesh, sine_field);
  for (int i = 0; i <= spec.time_steps; ++i) {
    const double c = prob.time_mesh.times[i] * prob.time_mesh.times[i];
    auto& yd = prob.objective.y_desired[i];
    yd.resize(sine_nodal.size());
    for (std::size_t d = 0; d < yd.size(); ++d) yd[d] = c * sine_nodal[d];
  }
  return prob;
}

RunSummary run_case_on(const Problem& prob, ExperimentCase c,
                       std::span<const double> tau0, const Preset& preset,
                       const OptimizerConfig& config,
                       const std::optional<std::string>& out_dir,
                       bool dump_traj) {
  if (static_cast<int>(tau0.size()) != prob.n_switch()) {
    throw std::invalid_argument("run_case: tau0 must have length " +
                                std::to_string(prob.n_switch()));
  }
  const auto t_begin = std::chrono::steady_clock::now();
  const std::vector<double> start =
      project_onto_ordered(tau0, prob.horizon());

  const ObjectiveFn obj_fn = [&prob](std::span<const double> tau) {
    return objective(tau, prob);
  };
  // The interpolated-adjoint pairing drives the iteration: the exact
  // derivative of the slab-averaged forcing vanishes on the time lattice,
  // where all tabulated starting points live.
  const GradientFn grad_fn = [&prob](std::span<const double> tau) {
    return gradient_interpolated_adjoint(tau, prob);
  };
  OptimizeResult opt =
      optimize(start, obj_fn, grad_fn, prob.horizon(), config);

  RunSummary summary;
  summary.experiment = c;
  summary.preset = preset.name;
  summary.tau0.assign(tau0.begin(), tau0.end());
  summary.final_tau = opt.tau;
  summary.objective = opt.history.back().objective;
  summary.residual = opt.history.back().residual;
  summary.stop_reason = opt.stop_reason;
  summary.iterations = opt.history.back().iter;
  summary.history = std::move(opt.history);
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();

  if (out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(*out_dir);
    {
      std::ofstream csv(fs::path(*out_dir) / "history.csv");
      write_history_csv(csv, summary.history);
    }
    {
      std::ofstream json(fs::path(*out_dir) / "summary.json");
      json << summary_to_json(summary) << '\n';
    }
    if (dump_traj) {
      const Trajectory y =
          forward_solve(summary.final_tau, prob.pattern, prob.slab_loads,
                        prob.y0, prob.fem, prob.time_mesh, prob.f,
                        prob.cg_tol);
      std::ofstream txt(fs::path(*out_dir) / "trajectory.txt");
      dump_trajectory(txt, y);
    }
  }
  return summary;
}

RunSummary run_case(ExperimentCase c, std::span<const double> tau0,
                    const Preset& preset, const OptimizerConfig& config,
                    const std::optional<std::string>& out_dir,
                    bool dump_traj) {
  const Problem prob = make_problem(spec_for(c, preset));
  return run_case_on(prob, c, tau0, preset, config, out_dir, dump_traj);
}

std::vector<RunSummary> run_all(const Preset& preset,
                                const OptimizerConfig& config,
                                const std::optional<std::string>& out_dir) {
  const std::array<ExperimentCase, 4> cases = {
      ExperimentCase::i, ExperimentCase::ii, ExperimentCase::iii,
      ExperimentCase::iv};
  const auto starts = reference_initial_points();

  // One assembled problem per case, shared read-only by the runs.
  std::vector<Problem> problems;
  problems.reserve(cases.size());
  for (const auto c : cases) problems.push_back(make_problem(spec_for(c, preset)));

  std::vector<RunSummary> summaries(cases.size() * starts.size());
  std::exception_ptr failure;
#pragma omp parallel for collapse(2) schedule(dynamic, 1)
  for (int ci = 0; ci < static_cast<int>(cases.size()); ++ci) {
    for (int si = 0; si < static_cast<int>(starts.size()); ++si) {
      try {
        std::optional<std::string> dir;
        if (out_dir) {
          dir = *out_dir + "/case_" + to_string(cases[ci]) + "_start_" +
                std::to_string(si + 1);
        }
        summaries[ci * starts.size() + si] = run_case_on(
            problems[ci], cases[ci], starts[si], preset, config, dir, false);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summaries;
}

std::string summary_to_json(const RunSummary& summary) {
  nlohmann::json j;
  j["schema"] = 1;
  j["case"] = to_string(summary.experiment);
  j["preset"] = summary.preset;
  j["tau0"] = summary.tau0;
  j["final_tau"] = summary.final_tau;
  j["objective"] = summary.objective;
  j["residual"] = summary.residual;
  j["stop_reason"] = to_string(summary.stop_reason);
  j["iterations"] = summary.iterations;
  j["wall_time_s"] = summary.wall_time_s;
  return j.dump(2);
}

std::vector<double> sample_interior_tau(std::mt19937_64& rng,
                                        const TimeMesh& tm, int n,
                                        double margin) {
  const double horizon = tm.horizon();
  std::uniform_real_distribution<double> uni(margin, horizon - margin);
  const auto near_kink = [&tm](double t) {
    const auto it = std::upper_bound(tm.times.begin(), tm.times.end(), t);
    const int slab =
        std::clamp(static_cast<int>(it - tm.times.begin()) - 1, 0,
                   tm.steps() - 1);
    const double lo = tm.times[slab];
    const double hi = tm.times[slab + 1];
    const double radius = (hi - lo) / 16.0;
    const double mid = 0.5 * (lo + hi);
    return std::abs(t - lo) < radius || std::abs(t - hi) < radius ||
           std::abs(t - mid) < radius;
  };
  std::vector<double> tau(n);
  for (double& t : tau) {
    do {
      t = uni(rng);
    } while (near_kink(t));
  }
  std::sort(tau.begin(), tau.end());
  return tau;
}

std::pair<double, double> ode_counterexample(double psi1, double g_slope,
                                             double tau_bar) {
  if (tau_bar <= 0.0 || tau_bar >= 1.0) {
    throw std::invalid_argument("ode_counterexample: tau_bar must be in (0,1)");
  }
  // Closed-form ODE solution for y' = chi_{[a,b)} psi1, y(0) = 0 on [0,1]:
  // y ramps on the forward interval and is zero when the interval is
  // degenerate or reversed (plain indicator, not the modified one).
  const auto state_at = [psi1](double a, double b, double t) {
    if (a > b || b <= 0.0 || a >= 1.0) return 0.0;
    const double lo = std::max(a, 0.0);
    if (t < a) return 0.0;
    const double upper = std::min(t, b);
    return upper > lo ? psi1 * (upper - lo) : 0.0;
  };
  const auto reduced = [&](double t1, double t2) {
    return g_slope * state_at(t1, t2, t2);  // g(z) = g_slope z
  };

  const double base = reduced(tau_bar, tau_bar);
  const auto one_sided = [&](double direction) {
    // difference quotients on a shrinking step sequence
    std::vector<double> q;
    double eps = 1e-2;
    for (int m = 0; m < 8; ++m, eps *= 0.5) {
      const double h2 = direction * eps;
      q.push_back((reduced(tau_bar, tau_bar + h2) - base) / eps);
    }
    // one Richardson sweep for a quotient affine in eps
    std::vector<double> r(q.size() - 1);
    for (std::size_t m = 0; m + 1 < q.size(); ++m) {
      r[m] = 2.0 * q[m + 1] - q[m];
    }
    return r.back();
  };
  return {one_sided(-1.0), one_sided(+1.0)};
}

}  // namespace swopt
