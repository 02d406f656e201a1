#include "swopt/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swopt {

PoolBlocks pool(std::span<const double> tau) {
  const int n = static_cast<int>(tau.size());
  PoolBlocks blocks;
  blocks.breakpoints.push_back(0);
  int start = 0;
  while (start < n) {
    // smallest j > start minimizing the prefix mean of tau[start..j)
    double best_mean = tau[start];
    int best_end = start + 1;
    double running = tau[start];
    for (int j = start + 1; j < n; ++j) {
      running += tau[j];
      const double mean = running / (j - start + 1);
      if (mean < best_mean) {
        best_mean = mean;
        best_end = j + 1;
      }
    }
    blocks.breakpoints.push_back(best_end);
    blocks.block_means.push_back(best_mean);
    start = best_end;
  }
  return blocks;
}

std::vector<double> project_onto_ordered(std::span<const double> tau,
                                         double horizon) {
  if (horizon <= 0.0) {
    throw std::invalid_argument("project_onto_ordered: horizon <= 0");
  }
  const PoolBlocks blocks = pool(tau);
  std::vector<double> out(tau.size());
  for (std::size_t b = 0; b < blocks.block_means.size(); ++b) {
    const double v = std::clamp(blocks.block_means[b], 0.0, horizon);
    for (int j = blocks.breakpoints[b]; j < blocks.breakpoints[b + 1]; ++j) {
      out[j] = v;
    }
  }
  return out;
}

namespace {

// Candidate for one active-set pattern: merge chains of active ordering
// constraints into blocks, pin blocks touched by the active bounds, check
// primal feasibility and multiplier signs.
bool try_active_set(std::span<const double> tau, double horizon,
                    unsigned mask, std::vector<double>& out) {
  const int n = static_cast<int>(tau.size());
  const bool lower_active = mask & 1u;                 // t_1 = 0
  const bool upper_active = (mask >> n) & 1u;          // t_n = T
  // ordering constraint i (1..n-1): t_i = t_{i+1} active iff bit i set
  std::vector<double> cand(n);
  int i = 0;
  while (i < n) {
    int j = i;
    double sum = tau[i];
    while (j + 1 < n && ((mask >> (j + 1)) & 1u)) {
      ++j;
      sum += tau[j];
    }
    double value = sum / (j - i + 1);
    const bool pinned_low = lower_active && i == 0;
    const bool pinned_high = upper_active && j == n - 1;
    if (pinned_low && pinned_high) return false;  // 0 = T impossible
    if (pinned_low) value = 0.0;
    if (pinned_high) value = horizon;
    for (int r = i; r <= j; ++r) cand[r] = value;
    i = j + 1;
  }

  // Tight enough that a wrong active set cannot sneak a candidate past the
  // 1e-12 fuzz comparison, loose enough for prefix-sum rounding.
  const double tol = 1e-11;
  // primal feasibility
  if (cand[0] < -tol || cand[n - 1] > horizon + tol) return false;
  for (int r = 0; r + 1 < n; ++r) {
    if (cand[r] > cand[r + 1] + tol) return false;
  }
  // multipliers from the gradient equation
  //   cand_j - tau_j + (lambda_{j+1} - lambda_j) = 0
  // with lambda_i = 0 on inactive constraints.
  std::vector<double> prefix(n + 1, 0.0);  // prefix[j] = sum_{r<j}(tau_r - cand_r)
  for (int r = 0; r < n; ++r) prefix[r + 1] = prefix[r] + (tau[r] - cand[r]);
  double lambda1;
  if (!lower_active) {
    lambda1 = 0.0;
  } else {
    int inactive = -1;
    for (int c = 1; c <= n; ++c) {
      if (!((mask >> c) & 1u)) {
        inactive = c;
        break;
      }
    }
    if (inactive < 0) return false;  // all n+1 constraints active
    lambda1 = -prefix[inactive];  // forces lambda_{inactive+1} = 0 (1-based)
  }
  for (int c = 0; c <= n; ++c) {
    const double lambda_c = lambda1 + prefix[c];
    const bool active = (mask >> c) & 1u;
    if (!active && std::abs(lambda_c) > tol) return false;
    if (active && lambda_c < -tol) return false;
  }
  out = std::move(cand);
  return true;
}

}  // namespace

std::vector<double> qp_oracle_project(std::span<const double> tau,
                                      double horizon) {
  const int n = static_cast<int>(tau.size());
  if (n > 12) {
    throw std::invalid_argument("qp_oracle_project: oracle scale is n <= 12");
  }
  if (horizon <= 0.0) {
    throw std::invalid_argument("qp_oracle_project: horizon <= 0");
  }
  std::vector<double> out;
  for (unsigned mask = 0; mask < (1u << (n + 1)); ++mask) {
    if (try_active_set(tau, horizon, mask, out)) return out;
  }
  throw std::logic_error("qp_oracle_project: no KKT point found");
}

KktReport kkt_verify(std::span<const double> tau,
                     std::span<const double> tau_star, double horizon,
                     double tol) {
  const int n = static_cast<int>(tau.size());
  KktReport report;
  if (static_cast<int>(tau_star.size()) != n) {
    report.failed_condition = "dimension mismatch";
    return report;
  }

  const PoolBlocks blocks = pool(tau);
  std::vector<double> tau_hat(n);
  for (std::size_t b = 0; b < blocks.block_means.size(); ++b) {
    for (int j = blocks.breakpoints[b]; j < blocks.breakpoints[b + 1]; ++j) {
      tau_hat[j] = blocks.block_means[b];
    }
  }

  // lambda_1 = -sum_j min(tau_hat_j, 0)
  // lambda_i = sum_{j<i} (tau_j - tau*_j) + lambda_1,  i = 2..n
  // lambda_{n+1} = sum_j max(tau_hat_j - T, 0)
  std::vector<double>& lambda = report.lambda;
  lambda.assign(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    lambda[0] -= std::min(tau_hat[j], 0.0);
    lambda[n] += std::max(tau_hat[j] - horizon, 0.0);
  }
  double acc = lambda[0];
  for (int i = 1; i < n; ++i) {
    acc += tau[i - 1] - tau_star[i - 1];
    lambda[i] = acc;
  }

  // (KKT: feasibility)
  if (tau_star[0] < -tol || tau_star[n - 1] > horizon + tol) {
    report.failed_condition = "feasibility";
    return report;
  }
  for (int j = 0; j + 1 < n; ++j) {
    if (tau_star[j] > tau_star[j + 1] + tol) {
      report.failed_condition = "feasibility";
      return report;
    }
  }
  // (KKT: gradient eq)  tau*_j - tau_j + lambda_{j+1} - lambda_j = 0
  for (int j = 0; j < n; ++j) {
    const double r = tau_star[j] - tau[j] + lambda[j + 1] - lambda[j];
    if (std::abs(r) > tol) {
      report.failed_condition = "gradient eq";
      return report;
    }
  }
  // (KKT: complementarity) with tau*_0 := 0 and tau*_{n+1} := T
  for (int i = 0; i <= n; ++i) {
    if (lambda[i] < -tol) {
      report.failed_condition = "complementarity";
      return report;
    }
    const double prev = i == 0 ? 0.0 : tau_star[i - 1];
    const double next = i == n ? horizon : tau_star[i];
    if (std::abs(lambda[i] * (prev - next)) > tol) {
      report.failed_condition = "complementarity";
      return report;
    }
  }
  report.ok = true;
  return report;
}

}  // namespace swopt
