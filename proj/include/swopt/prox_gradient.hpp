#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace swopt {

struct OptimizerConfig {
  double gamma = 0.5;               // sufficient-decrease parameter in (0,1)
  int max_iters = 200;
  double tol_residual = 1e-8;       // fixed-point residual
  double tol_relative_change = 1e-8;
  double L_init = 1.0;
  bool warm_start_L = false;        // start backtracking from the last accepted L
  int max_backtracks = 60;          // doublings before declaring a broken gradient
};

enum class StopReason { residual, relative_change, max_iters };
const char* to_string(StopReason r);

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double residual = 0.0;  // NaN on the initial record
  double L = 0.0;         // NaN on the initial record
  int n_backtracks = 0;
  std::vector<double> tau;
};

struct OptimizeResult {
  std::vector<double> tau;
  std::vector<IterationRecord> history;
  StopReason stop_reason = StopReason::max_iters;
  double final_L = 1.0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/// Projected/proximal gradient method with doubling backtracking. Per outer
/// iteration: evaluate the gradient, double L from L_init until
///   J(tau) - J(P(tau - g/L)) >= gamma L |tau - P(tau - g/L)|^2,
/// accept the projected point, and stop on a small fixed-point residual, a
/// small relative change, or the iteration cap. All iterates stay feasible.
/// Throws std::runtime_error when max_backtracks doublings do not produce
/// sufficient decrease (a non-descent direction, i.e. a broken gradient).
OptimizeResult optimize(std::span<const double> tau0,
                        const ObjectiveFn& objective,
                        const GradientFn& gradient, double horizon,
                        const OptimizerConfig& config);

/// True iff objective values are non-increasing across the history
/// (tolerance for floating-point ties).
bool check_descent(const std::vector<IterationRecord>& history,
                   double tol = 1e-14);

/// CSV layout: iteration,objective,residual,L,n_backtracks,tau_1..tau_n
void write_history_csv(std::ostream& os,
                       const std::vector<IterationRecord>& history);

}  // namespace swopt
