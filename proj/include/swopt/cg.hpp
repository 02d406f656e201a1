#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swopt/csr.hpp"

namespace swopt {

class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, double residual, int iterations)
      : std::runtime_error(what),
        final_relative_residual(residual),
        iterations(iterations) {}
  double final_relative_residual;
  int iterations;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. One instance
/// caches the inverse diagonal and reusable work vectors, so the constant
/// time-stepping matrix pays the preconditioner setup once per trajectory.
/// The workspace makes solve() non-reentrant: use one instance per thread.
class JacobiCg {
 public:
  explicit JacobiCg(const CsrMatrix& m);

  /// Solves m x = b with ||m x - b||_2 <= rel_tol ||b||_2, measured on the
  /// true residual. x carries the initial guess on entry and the solution on
  /// exit. Returns the iteration count; throws SolveFailure when the cap of
  /// 10 * n_rows iterations is exceeded.
  int solve(std::span<const double> b, std::span<double> x,
            double rel_tol) const;

 private:
  const CsrMatrix* m_;
  std::vector<double> inv_diag_;
  mutable std::vector<double> r_, z_, p_, ap_;
};

/// One-shot convenience wrapper with a zero initial guess.
std::vector<double> solve_spd(const CsrMatrix& m, std::span<const double> b,
                              double rel_tol = 1e-12);

}  // namespace swopt
