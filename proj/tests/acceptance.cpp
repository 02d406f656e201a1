// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. The two paper-scale optimization runs dominate the
// runtime; everything else finishes in seconds.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "swopt/cg.hpp"
#include "swopt/experiments.hpp"
#include "swopt/isotonic.hpp"
#include "swopt/kernels.hpp"
#include "swopt/mesh.hpp"
#include "swopt/objective.hpp"

using namespace swopt;

namespace {

struct Criterion {
  int id;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Criterion> results;

template <typename F>
void run_criterion(int id, const char* title, F&& body) {
  std::printf("criterion %d: %s ...\n", id, title);
  std::fflush(stdout);
  const double t0 = omp_get_wtime();
  Criterion c{id, false, "", 0.0};
  try {
    c = body();
    c.id = id;
  } catch (const std::exception& e) {
    c = {id, false, std::string("exception: ") + e.what(), 0.0};
  }
  c.seconds = omp_get_wtime() - t0;
  std::printf("%s criterion %d (%.1f s): %s\n", c.pass ? "PASS" : "FAIL", id,
              c.seconds, c.detail.c_str());
  std::fflush(stdout);
  results.push_back(c);
}

double dist_inf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

double norm2_all(const std::vector<std::vector<double>>& vs) {
  double acc = 0.0;
  for (const auto& v : vs) acc += kernels::dot(v, v);
  return std::sqrt(acc);
}

// ---------------------------------------------------------------- criterion 1
Criterion projection_oracle_equivalence() {
  std::mt19937_64 rng(20240901);
  const double horizon = 1.0;
  std::uniform_real_distribution<double> uni(-2.0, horizon + 2.0);
  std::uniform_int_distribution<int> pick_n(2, 10);
  double worst = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const int n = pick_n(rng);
    std::vector<double> tau(n);
    for (double& t : tau) t = uni(rng);
    const auto fast = project_onto_ordered(tau, horizon);
    const auto slow = qp_oracle_project(tau, horizon);
    worst = std::max(worst, dist_inf(fast, slow));
    if (worst > 1e-12) {
      return {1, false, "projection mismatch " + std::to_string(worst), 0};
    }
    const auto kkt = kkt_verify(tau, fast, horizon);
    if (!kkt.ok) {
      return {1, false, "KKT check failed: " + kkt.failed_condition, 0};
    }
  }
  return {1, true,
          "10^4 random vectors, n in 2..10: max |project - oracle| = " +
              std::to_string(worst) + ", all KKT systems verified",
          0};
}

// ---------------------------------------------------------------- criterion 2
Criterion gradient_correctness() {
  const Preset desk = desk_preset();
  const Nonlinearity::Kind kinds[] = {Nonlinearity::Kind::zero,
                                      Nonlinearity::Kind::sine,
                                      Nonlinearity::Kind::arctan};
  const double alphas[] = {0.0, 1e-6};
  double worst = 0.0;
  int samples_total = 0;
  for (int combo = 0; combo < 6; ++combo) {
    const int samples = combo < 4 ? 17 : 16;  // 100 points over 6 combos
    ProblemSpec spec = spec_for(ExperimentCase::i, desk);
    spec.alpha = alphas[combo % 2];
    spec.f = Nonlinearity{kinds[combo / 2]};
    const Problem prob = make_problem(spec);

    std::mt19937_64 rng(1000 + combo);
    std::vector<std::vector<double>> taus(samples);
    for (auto& tau : taus) {
      tau = sample_interior_tau(rng, prob.time_mesh, spec.n_switch);
    }
    std::vector<double> errs(samples, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < samples; ++s) {
      const auto g = gradient(taus[s], prob);
      const auto fd = fd_gradient(taus[s], prob, 1e-6);
      double err = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double denom = std::max(std::abs(fd[j]), 1e-10);
        err = std::max(err, std::abs(g[j] - fd[j]) / denom);
      }
      errs[s] = err;
    }
    for (double e : errs) worst = std::max(worst, e);
    samples_total += samples;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d interior points x {zero,sin,arctan} x {0,1e-6}: worst "
                "componentwise rel err %.2e (tol 1e-5)",
                samples_total, worst);
  return {2, worst <= 1e-5, buf, 0};
}

// ---------------------------------------------------------------- criterion 3
Criterion adjoint_transpose_identity() {
  const Preset desk = desk_preset();
  const TriMesh mesh = build_mesh(desk.nx);
  const FemMatrices fem = assemble(mesh);
  const TimeMesh tm = TimeMesh::uniform(1.0, desk.time_steps);
  FormPattern pattern;
  pattern.n_switch = 10;
  pattern.psi_nodal = interpolate_nodal(mesh, psi_field);
  const int dofs = fem.mass.n_rows;
  const auto tau = reference_tau_opt();

  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto random_loads = [&] {
    std::vector<std::vector<double>> loads(tm.steps(),
                                           std::vector<double>(dofs));
    for (auto& l : loads) {
      for (double& v : l) v = uni(rng);
    }
    return loads;
  };

  double worst = 0.0;
  for (const auto kind :
       {Nonlinearity::Kind::zero, Nonlinearity::Kind::sine,
        Nonlinearity::Kind::arctan}) {
    const Nonlinearity f{kind};
    std::vector<double> y0(dofs);
    for (double& v : y0) v = uni(rng);
    const auto base = forward_solve(tau, pattern, {}, y0, fem, tm, f, 1e-14);
    for (int pair = 0; pair < 7; ++pair) {
      const auto h = random_loads();
      const auto g = random_loads();
      const auto dy = linearized_forward(base, h, fem, tm, f, 1e-14);
      const auto p = adjoint_solve(base, g, fem, tm, f, 1e-14);
      double fwd = 0.0, adj = 0.0;
      for (int i = 1; i <= tm.steps(); ++i) {
        fwd += kernels::dot(g[i - 1], dy.values[i]);
        adj += kernels::dot(h[i - 1], p.values[i - 1]);
      }
      const double scale = norm2_all(h) * norm2_all(g);
      worst = std::max(worst, std::abs(fwd - adj) / scale);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "21 (h,g) pairs x 3 nonlinearities on desk: worst "
                "|<Lh,g>-<h,L*g>| / (|h||g|) = %.2e (tol 1e-11)",
                worst);
  return {3, worst <= 1e-11, buf, 0};
}

// ---------------------------------------------------------------- criterion 4
Criterion manufactured_exactness_paper() {
  const Problem prob =
      make_problem(spec_for(ExperimentCase::ii, paper_preset()));
  const auto tau_opt = reference_tau_opt();
  const double j = objective(tau_opt, prob);
  const auto g = gradient(tau_opt, prob);
  double g_norm = std::sqrt(kernels::dot(g, g));
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "case (ii) at tau_opt, paper scale: J = %.2e (tol 1e-12), "
                "|grad| = %.2e (tol 1e-8)",
                j, g_norm);
  return {4, j < 1e-12 && g_norm < 1e-8, buf, 0};
}

// ---------------------------------------------------------------- criterion 5
Criterion table8_reproduction() {
  const auto tau0 = reference_initial_points()[2];
  OptimizerConfig config;
  const auto summary =
      run_case(ExperimentCase::ii, tau0, paper_preset(), config);
  const double dev = dist_inf(summary.final_tau, reference_tau_opt());
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "case (ii) from the table-8 start: %d iters (stop=%s), max "
                "|tau - tau_opt| = %.2e (tol 2e-3), J = %.2e (tol 1e-6)",
                summary.iterations, to_string(summary.stop_reason), dev,
                summary.objective);
  return {5, dev <= 2e-3 && summary.objective <= 1e-6, buf, 0};
}

// ---------------------------------------------------------------- criterion 6
Criterion nonglobal_stationarity() {
  const auto tau0 = reference_initial_points()[0];
  OptimizerConfig config;
  const auto summary =
      run_case(ExperimentCase::i, tau0, paper_preset(), config);
  const double dev = dist_inf(summary.final_tau, reference_tau_opt());
  const bool tolerance_stop = summary.stop_reason != StopReason::max_iters;
  const bool in_band =
      summary.objective >= 5e-4 && summary.objective <= 5e-3;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "case (i) from the table-1 start: %d iters (stop=%s), J = "
                "%.3e (band [5e-4, 5e-3]), max |tau - tau_opt| = %.3f (> 0.05)",
                summary.iterations, to_string(summary.stop_reason),
                summary.objective, dev);
  return {6, tolerance_stop && in_band && dev > 0.05, buf, 0};
}

// ---------------------------------------------------------------- criterion 7
Criterion descent_on_all_runs() {
  OptimizerConfig config;
  const auto summaries = run_all(desk_preset(), config, std::nullopt);
  int max_iter_stops_with_alpha = 0;
  for (const auto& s : summaries) {
    if (!check_descent(s.history)) {
      return {7, false,
              std::string("objective increased in case ") +
                  to_string(s.experiment),
              0};
    }
    for (const auto& rec : s.history) {
      if (rec.tau.front() < 0.0 || rec.tau.back() > 1.0 ||
          !std::is_sorted(rec.tau.begin(), rec.tau.end())) {
        return {7, false, "infeasible iterate recorded", 0};
      }
    }
    if (case_alpha(s.experiment) > 0.0 &&
        s.stop_reason == StopReason::max_iters) {
      ++max_iter_stops_with_alpha;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "all 20 desk runs: monotone objectives, feasible iterates "
                "(%d alpha>0 runs hit max_iters)",
                max_iter_stops_with_alpha);
  return {7, true, buf, 0};
}

// ---------------------------------------------------------------- criterion 8
Criterion ode_example() {
  const auto [left, right] = ode_counterexample(1.0, 1.0, 0.5);
  char buf[120];
  std::snprintf(buf, sizeof buf,
                "one-sided derivatives (%.6f, %.6f), expected (0, 1)", left,
                right);
  return {8, std::abs(left) <= 1e-3 && std::abs(right - 1.0) <= 1e-3, buf, 0};
}

// ---------------------------------------------------------------- criterion 9
Criterion fem_convergence() {
  const auto max_err = [](int nx) {
    const TriMesh mesh = build_mesh(nx);
    const FemMatrices fem = assemble(mesh);
    const double pi = 3.14159265358979323846;
    const auto f = interpolate_nodal(mesh, [pi](double x, double y) {
      return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
    });
    const auto exact = interpolate_nodal(mesh, [pi](double x, double y) {
      return std::sin(pi * x) * std::sin(pi * y);
    });
    const auto u = solve_spd(fem.stiffness, spmv(fem.mass, f), 1e-13);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      err = std::max(err, std::abs(u[i] - exact[i]));
    }
    return err;
  };
  const double ratio = max_err(20) / max_err(40);
  char buf[120];
  std::snprintf(buf, sizeof buf,
                "Poisson max-error ratio nx=20 / nx=40 = %.3f (band "
                "[3.5, 4.5])",
                ratio);
  return {9, ratio > 3.5 && ratio < 4.5, buf, 0};
}

}  // namespace

int main() {
  std::printf("acceptance suite (threads: %d)\n", omp_get_max_threads());

  run_criterion(1, "projection oracle equivalence + KKT",
                projection_oracle_equivalence);
  run_criterion(8, "ODE counterexample one-sided derivatives", ode_example);
  run_criterion(9, "FEM second-order convergence", fem_convergence);
  run_criterion(3, "adjoint transpose identity", adjoint_transpose_identity);
  run_criterion(4, "manufactured exactness, case (ii) paper scale",
                manufactured_exactness_paper);
  run_criterion(2, "gradient vs central differences", gradient_correctness);
  run_criterion(7, "descent over the 20 desk runs", descent_on_all_runs);
  run_criterion(5, "table-8 reproduction, paper scale", table8_reproduction);
  run_criterion(6, "non-global stationary point, paper scale",
                nonglobal_stationarity);

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  std::printf("\n==== acceptance summary ====\n");
  int failures = 0;
  for (const auto& c : results) {
    std::printf("%s criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.detail.c_str());
    failures += c.pass ? 0 : 1;
  }
  std::printf("%d/9 criteria passed\n",
              static_cast<int>(results.size()) - failures);
  return failures == 0 ? 0 : 1;
}
