#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swopt/objective.hpp"
#include "swopt/prox_gradient.hpp"

namespace swopt {

/// The four experiment families: Tikhonov weight alpha crossed with the mode
/// used to manufacture the exact solution.
///   i   alpha = 0      exact solution in function space
///   ii  alpha = 0      exact solution after discretization
///   iii alpha = 1e-6   exact solution in function space
///   iv  alpha = 1e-6   exact solution after discretization
enum class ExperimentCase { i, ii, iii, iv };

ExperimentCase parse_case(const std::string& name);
const char* to_string(ExperimentCase c);
double case_alpha(ExperimentCase c);
bool case_discrete_exact(ExperimentCase c);

struct Preset {
  std::string name;
  int nx = 0;          // nodes per spatial dimension, boundary included
  int time_steps = 0;
  double cg_tol = 1e-12;
};

Preset desk_preset();   // nx = 20, k = 250: seconds per run
Preset paper_preset();  // nx = 40, k = 1000: the scale of the reported tables

/// Reference switching times of the manufactured optimum.
std::vector<double> reference_tau_opt();

/// The five initial points the tables are run from.
std::array<std::vector<double>, 5> reference_initial_points();

/// Gaussian form function 10 exp(-2 |x - (1/2,1/2)|^2).
double psi_field(double x1, double x2);

/// Desired state t^2 sin(pi x1) sin(pi x2).
double desired_state(double t, double x1, double x2);

/// Problem data prior to assembly. tau_opt doubles as tau_d.
struct ProblemSpec {
  double horizon = 1.0;
  int n_switch = 10;
  int nx = 20;
  int time_steps = 250;
  double alpha = 0.0;
  bool discrete_exact = false;
  double cg_tol = 1e-12;
  Nonlinearity f{};
  std::vector<double> tau_opt = reference_tau_opt();
};

ProblemSpec spec_for(ExperimentCase c, const Preset& preset);

/// Slab-averaged loads (already M-weighted) for the function-space
/// construction: w = dy_d/dt - Laplace(y_d) - c_opt(t) psi, with the
/// polynomial-in-t moments against the slab hats integrated exactly.
std::vector<std::vector<double>> build_forcing_continuous(
    const ProblemSpec& spec, const TriMesh& mesh, const FemMatrices& fem,
    const TimeMesh& tm);

/// Loads making the nodal interpolant of y_d satisfy the Euler scheme
/// exactly at tau_opt, so the discrete optimum has objective zero.
std::vector<std::vector<double>> build_forcing_discrete(
    const ProblemSpec& spec, const TriMesh& mesh, const FemMatrices& fem,
    const TimeMesh& tm);

/// Full assembly: mesh, matrices, loads, desired state, pattern.
Problem make_problem(const ProblemSpec& spec);

struct RunSummary {
  ExperimentCase experiment{};
  std::string preset;
  std::vector<double> tau0;
  std::vector<double> final_tau;
  double objective = 0.0;
  double residual = 0.0;
  StopReason stop_reason = StopReason::max_iters;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::vector<IterationRecord> history;
};

/// Projects tau0 onto the feasible set, optimizes, and (when out_dir is
/// given) writes history.csv, summary.json and optionally trajectory.txt.
RunSummary run_case(ExperimentCase c, std::span<const double> tau0,
                    const Preset& preset, const OptimizerConfig& config,
                    const std::optional<std::string>& out_dir = std::nullopt,
                    bool dump_trajectory = false);

/// Same but reusing an assembled problem (run_all shares one per case).
RunSummary run_case_on(const Problem& prob, ExperimentCase c,
                       std::span<const double> tau0, const Preset& preset,
                       const OptimizerConfig& config,
                       const std::optional<std::string>& out_dir = std::nullopt,
                       bool dump_trajectory = false);

/// The 20 table runs (4 cases x 5 initial points). Runs execute
/// concurrently when OpenMP threads are available; each run owns its output
/// subdirectory <out_dir>/case_<c>_start_<s>.
std::vector<RunSummary> run_all(const Preset& preset,
                                const OptimizerConfig& config,
                                const std::optional<std::string>& out_dir);

std::string summary_to_json(const RunSummary& summary);

/// Sorted strictly interior switching times for derivative checks. The
/// objective is C^1 everywhere, but its second derivative jumps where a
/// component crosses a time node or slab midpoint, which would poison a
/// central difference; samples keep a dt/16 distance from those points.
std::vector<double> sample_interior_tau(std::mt19937_64& rng,
                                        const TimeMesh& tm, int n,
                                        double margin = 0.02);

/// One-sided difference-quotient limits of g(y(tau_2)) for the scalar ODE
/// y' = chi_{[tau_1, tau_2)} psi1 at tau = (tau_bar, tau_bar) in directions
/// (0,-1) and (0,+1), computed from a shrinking step sequence with
/// Richardson extrapolation. Returns {left, right}; the closed form is
/// {0, g'(0) psi1}.
std::pair<double, double> ode_counterexample(double psi1, double g_slope,
                                             double tau_bar);

}  // namespace swopt
