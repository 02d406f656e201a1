// Command-line driver for the switching-time optimization experiments.
//
// Subcommands:
//   run            one experiment case from a given initial point
//   run-all        the 20 table runs (4 cases x 5 initial points)
//   project        Euclidean projection onto {0 <= t_1 <= ... <= t_n <= T}
//   check-gradient adjoint gradient vs. central finite differences
//   demo-ode       one-sided derivatives of the point-evaluation ODE example
//
// Every flag can also come from a `key = value` config file (--config);
// command-line flags override file values. Exit codes: 0 success, 1 solver
// error, 2 invalid configuration.

#include <cstdio>
#include <exception>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swopt/experiments.hpp"
#include "swopt/isotonic.hpp"

namespace {

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(text);
  // commas or whitespace both separate entries
  while (std::getline(ss, token, ',')) {
    std::stringstream inner(token);
    double v;
    while (inner >> v) out.push_back(v);
  }
  return out;
}

swopt::Preset preset_by_name(const std::string& name) {
  if (name == "desk") return swopt::desk_preset();
  if (name == "paper") return swopt::paper_preset();
  throw CLI::ValidationError("--preset", "unknown preset: " + name);
}

struct OptimizerFlags {
  double gamma = 0.5;
  int max_iters = 200;
  double tol_residual = 1e-8;
  double tol_relative_change = 1e-8;
  bool warm_start_L = false;

  swopt::OptimizerConfig to_config() const {
    swopt::OptimizerConfig cfg;
    cfg.gamma = gamma;
    cfg.max_iters = max_iters;
    cfg.tol_residual = tol_residual;
    cfg.tol_relative_change = tol_relative_change;
    cfg.warm_start_L = warm_start_L;
    return cfg;
  }
};

void add_optimizer_flags(CLI::App* app, OptimizerFlags& flags) {
  app->add_option("--gamma", flags.gamma,
                  "sufficient-decrease parameter in (0,1)");
  app->add_option("--max-iters", flags.max_iters, "outer iteration cap");
  app->add_option("--tol-residual", flags.tol_residual,
                  "fixed-point residual tolerance");
  app->add_option("--tol-rel-change", flags.tol_relative_change,
                  "relative-change tolerance");
  app->add_flag("--warm-start-L", flags.warm_start_L,
                "start backtracking from the previously accepted L");
}

void print_summary(const swopt::RunSummary& s) {
  std::printf("case %s, preset %s: %d iterations, stop=%s\n",
              to_string(s.experiment), s.preset.c_str(), s.iterations,
              to_string(s.stop_reason));
  std::printf("  objective %.6e, residual %.6e, wall time %.1f s\n",
              s.objective, s.residual, s.wall_time_s);
  std::printf("  final tau:");
  for (double t : s.final_tau) std::printf(" %.4f", t);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switching-time optimization for the heat equation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // run
  auto* run = app.add_subcommand("run", "run one experiment case");
  std::string run_case_name = "ii";
  std::string run_tau0;
  std::string run_preset = "desk";
  std::string run_out_dir;
  bool run_dump_traj = false;
  OptimizerFlags run_flags;
  run->add_option("--case", run_case_name, "experiment case: i, ii, iii, iv");
  run->add_option("--tau0", run_tau0,
                  "initial switching times (comma separated; default: the "
                  "first tabulated initial point)");
  run->add_option("--preset", run_preset, "desk or paper");
  run->add_option("--out-dir", run_out_dir,
                  "directory for history.csv and summary.json");
  run->add_flag("--dump-trajectory", run_dump_traj,
                "also write trajectory.txt at the final iterate");
  add_optimizer_flags(run, run_flags);

  // run-all
  auto* run_all_cmd = app.add_subcommand("run-all", "all 20 table runs");
  std::string all_preset = "desk";
  std::string all_out_dir;
  OptimizerFlags all_flags;
  run_all_cmd->add_option("--preset", all_preset, "desk or paper");
  run_all_cmd->add_option("--out-dir", all_out_dir,
                          "parent directory for the per-run outputs");
  add_optimizer_flags(run_all_cmd, all_flags);

  // project
  auto* project_cmd =
      app.add_subcommand("project", "project a vector onto the feasible set");
  std::string project_tau;
  double project_horizon = 1.0;
  project_cmd->add_option("--tau", project_tau, "vector to project")
      ->required();
  project_cmd->add_option("--horizon", project_horizon, "upper bound T");

  // check-gradient
  auto* check_cmd = app.add_subcommand(
      "check-gradient", "compare the adjoint gradient with finite differences");
  unsigned check_seed = 1;
  int check_count = 10;
  std::string check_preset = "desk";
  std::string check_nonlin = "zero";
  double check_alpha = 0.0;
  check_cmd->add_option("--seed", check_seed, "RNG seed");
  check_cmd->add_option("--count", check_count, "number of random points");
  check_cmd->add_option("--preset", check_preset, "desk or paper");
  check_cmd->add_option("--nonlinearity", check_nonlin, "zero, sin or arctan");
  check_cmd->add_option("--alpha", check_alpha, "Tikhonov weight");

  // demo-ode
  auto* demo_cmd = app.add_subcommand(
      "demo-ode", "one-sided derivatives of the ODE point-evaluation example");
  double demo_psi1 = 1.0, demo_slope = 1.0, demo_tau_bar = 0.5;
  demo_cmd->add_option("--psi1", demo_psi1, "source amplitude");
  demo_cmd->add_option("--slope", demo_slope, "g'(0)");
  demo_cmd->add_option("--tau-bar", demo_tau_bar, "double switching point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      std::vector<double> tau0 = run_tau0.empty()
                                     ? swopt::reference_initial_points()[0]
                                     : parse_vector(run_tau0);
      const auto summary = swopt::run_case(
          swopt::parse_case(run_case_name), tau0, preset_by_name(run_preset),
          run_flags.to_config(),
          run_out_dir.empty() ? std::nullopt
                              : std::make_optional(run_out_dir),
          run_dump_traj);
      print_summary(summary);
    } else if (*run_all_cmd) {
      const auto summaries = swopt::run_all(
          preset_by_name(all_preset), all_flags.to_config(),
          all_out_dir.empty() ? std::nullopt
                              : std::make_optional(all_out_dir));
      for (const auto& s : summaries) print_summary(s);
    } else if (*project_cmd) {
      const std::vector<double> tau = parse_vector(project_tau);
      if (tau.empty()) {
        std::cerr << "project: --tau holds no numbers\n";
        return 2;
      }
      const auto projected =
          swopt::project_onto_ordered(tau, project_horizon);
      for (std::size_t j = 0; j < projected.size(); ++j) {
        if (j) std::printf(" ");
        std::printf("%.16g", projected[j]);
      }
      std::printf("\n");
    } else if (*check_cmd) {
      const swopt::Preset preset = preset_by_name(check_preset);
      auto spec = swopt::spec_for(swopt::ExperimentCase::i, preset);
      spec.alpha = check_alpha;
      spec.f = swopt::Nonlinearity::from_name(check_nonlin);
      const swopt::Problem prob = swopt::make_problem(spec);

      std::mt19937_64 rng(check_seed);
      double worst = 0.0;
      for (int s = 0; s < check_count; ++s) {
        const std::vector<double> tau =
            swopt::sample_interior_tau(rng, prob.time_mesh, spec.n_switch);
        const auto g = swopt::gradient(tau, prob);
        const auto fd = swopt::fd_gradient(tau, prob, 1e-6);
        double err = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
          const double denom = std::max(std::abs(fd[j]), 1e-10);
          err = std::max(err, std::abs(g[j] - fd[j]) / denom);
        }
        worst = std::max(worst, err);
        std::printf("sample %2d: max componentwise relative error %.3e\n",
                    s + 1, err);
      }
      std::printf("worst over %d samples: %.3e (%s)\n", check_count, worst,
                  worst <= 1e-5 ? "OK" : "FAIL");
      if (worst > 1e-5) return 1;
    } else if (*demo_cmd) {
      const auto [left, right] =
          swopt::ode_counterexample(demo_psi1, demo_slope, demo_tau_bar);
      std::printf("direction (0,-1): %.10f\n", left);
      std::printf("direction (0,+1): %.10f\n", right);
      std::printf("closed form     : 0 and g'(0) psi1 = %.10f\n",
                  demo_slope * demo_psi1);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
