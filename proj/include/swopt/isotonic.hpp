#pragma once

#include <span>
#include <string>
#include <vector>

namespace swopt {

/// Prefix-mean pooling blocks: breakpoints 0 = m_0 < ... < m_l = n and the
/// arithmetic mean of the entries in each block. Block means are
/// non-decreasing by construction.
struct PoolBlocks {
  std::vector<int> breakpoints;    // size l + 1, first 0, last n
  std::vector<double> block_means; // size l
};

/// Iterative pooling: each breakpoint is the smallest index minimizing the
/// running prefix mean of the remaining tail (first index wins ties).
PoolBlocks pool(std::span<const double> tau);

/// Euclidean projection onto {0 <= t_1 <= ... <= t_n <= T}: assign every
/// entry its block mean, then clamp into [0, T].
std::vector<double> project_onto_ordered(std::span<const double> tau,
                                         double horizon);

/// Reference projection by exhaustive active-set enumeration over the n+1
/// inequality constraints (test oracle, n <= 12).
std::vector<double> qp_oracle_project(std::span<const double> tau,
                                      double horizon);

/// Multiplier construction for the projection and the three KKT checks.
/// ok == false names the first violated condition; lambda has n+1 entries.
struct KktReport {
  bool ok = false;
  std::string failed_condition;
  std::vector<double> lambda;
};

KktReport kkt_verify(std::span<const double> tau,
                     std::span<const double> tau_star, double horizon,
                     double tol = 1e-10);

}  // namespace swopt
