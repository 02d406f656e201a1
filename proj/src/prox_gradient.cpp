#include "swopt/prox_gradient.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "swopt/isotonic.hpp"

namespace swopt {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::residual: return "residual";
    case StopReason::relative_change: return "relative_change";
    case StopReason::max_iters: return "max_iters";
  }
  return "max_iters";
}

namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<double> prox_step(std::span<const double> tau,
                              std::span<const double> g, double L,
                              double horizon) {
  std::vector<double> shifted(tau.begin(), tau.end());
  for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] -= g[j] / L;
  return project_onto_ordered(shifted, horizon);
}

}  // namespace

OptimizeResult optimize(std::span<const double> tau0,
                        const ObjectiveFn& objective,
                        const GradientFn& gradient, double horizon,
                        const OptimizerConfig& config) {
  if (config.gamma <= 0.0 || config.gamma >= 1.0) {
    throw std::invalid_argument("optimize: gamma must be in (0,1)");
  }
  if (config.tol_residual <= 0.0 || config.tol_relative_change <= 0.0 ||
      config.L_init <= 0.0) {
    throw std::invalid_argument("optimize: tolerances and L_init must be > 0");
  }

  OptimizeResult result;
  std::vector<double> tau(tau0.begin(), tau0.end());
  double obj = objective(tau);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  result.history.push_back({0, obj, nan, nan, 0, tau});

  double L_start = config.L_init;
  for (int k = 0; k < config.max_iters; ++k) {
    const std::vector<double> g = gradient(tau);

    double L = L_start;
    int n_backtracks = 0;
    std::vector<double> trial = prox_step(tau, g, L, horizon);
    double trial_obj = objective(trial);
    double step_norm = dist2(tau, trial);
    // At an exact fixed point trial == tau, both sides are zero and the
    // loop is skipped; the accepted residual then stops the iteration.
    while (obj - trial_obj < config.gamma * L * step_norm * step_norm) {
      if (++n_backtracks > config.max_backtracks) {
        throw std::runtime_error(
            "optimize: backtracking exceeded " +
            std::to_string(config.max_backtracks) +
            " doublings; gradient is not a descent direction");
      }
      L *= 2.0;
      trial = prox_step(tau, g, L, horizon);
      trial_obj = objective(trial);
      step_norm = dist2(tau, trial);
    }

    const double residual = step_norm;  // |P(tau - g/L) - tau| at accepted L
    const double tau_norm = norm2(tau);

    tau = std::move(trial);
    obj = trial_obj;
    result.history.push_back({k + 1, obj, residual, L, n_backtracks, tau});
    result.final_L = L;
    if (config.warm_start_L) L_start = L;

    if (residual < config.tol_residual) {
      result.stop_reason = StopReason::residual;
      break;
    }
    if (tau_norm > 0.0 && residual / tau_norm < config.tol_relative_change) {
      result.stop_reason = StopReason::relative_change;
      break;
    }
  }

  result.tau = std::move(tau);
  return result;
}

bool check_descent(const std::vector<IterationRecord>& history, double tol) {
  if (history.empty()) {
    throw std::invalid_argument("check_descent: empty history");
  }
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].objective > history[i - 1].objective + tol) return false;
  }
  return true;
}

void write_history_csv(std::ostream& os,
                       const std::vector<IterationRecord>& history) {
  const std::size_t n = history.empty() ? 0 : history.front().tau.size();
  os << "iteration,objective,residual,L,n_backtracks";
  for (std::size_t j = 1; j <= n; ++j) os << ",tau_" << j;
  os << '\n';
  os.precision(16);
  for (const auto& rec : history) {
    os << rec.iter << ',' << rec.objective << ',' << rec.residual << ','
       << rec.L << ',' << rec.n_backtracks;
    for (double t : rec.tau) os << ',' << t;
    os << '\n';
  }
}

}  // namespace swopt
