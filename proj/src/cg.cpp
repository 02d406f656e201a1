#include "swopt/cg.hpp"

#include <cmath>

#include "swopt/kernels.hpp"

namespace swopt {

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(kernels::dot(v, v));
}

}  // namespace

JacobiCg::JacobiCg(const CsrMatrix& m) : m_(&m) {
  inv_diag_.assign(m.n_rows, 0.0);
  for (int i = 0; i < m.n_rows; ++i) {
    const double d = m.value_at(i, i);
    if (d <= 0.0) {
      throw std::invalid_argument("JacobiCg: non-positive diagonal entry");
    }
    inv_diag_[i] = 1.0 / d;
  }
  r_.resize(m.n_rows);
  z_.resize(m.n_rows);
  p_.resize(m.n_rows);
  ap_.resize(m.n_rows);
}

int JacobiCg::solve(std::span<const double> b, std::span<double> x,
                    double rel_tol) const {
  const int n = m_->n_rows;
  if (b.size() != static_cast<std::size_t>(n) || x.size() != b.size()) {
    throw std::invalid_argument("JacobiCg::solve: dimension mismatch");
  }
  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0;
  }
  const double target = rel_tol * b_norm;
  const int cap = 10 * n;

  // r = b - m x for the incoming guess.
  spmv_into(*m_, x, r_);
  for (int i = 0; i < n; ++i) r_[i] = b[i] - r_[i];

  int total_iters = 0;
  // The recursive residual can drift from the true one near machine
  // precision; on claimed convergence recompute it and restart if needed.
  while (true) {
    double r_norm = norm2(r_);
    if (r_norm <= target) return total_iters;

    for (int i = 0; i < n; ++i) z_[i] = inv_diag_[i] * r_[i];
    std::copy(z_.begin(), z_.end(), p_.begin());
    double rz = kernels::dot(r_, z_);

    while (total_iters < cap) {
      ++total_iters;
      spmv_into(*m_, p_, ap_);
      const double pap = kernels::dot(p_, ap_);
      if (pap <= 0.0) {
        throw SolveFailure("cg: matrix not positive definite on Krylov space",
                           r_norm / b_norm, total_iters);
      }
      const double alpha = rz / pap;
      kernels::axpy(alpha, p_, x);
      kernels::axpy(-alpha, ap_, r_);
      r_norm = norm2(r_);
      if (r_norm <= target) break;
      for (int i = 0; i < n; ++i) z_[i] = inv_diag_[i] * r_[i];
      const double rz_next = kernels::dot(r_, z_);
      kernels::xpay(rz_next / rz, z_, p_);
      rz = rz_next;
    }

    // Verify against the true residual before declaring success.
    spmv_into(*m_, x, r_);
    for (int i = 0; i < n; ++i) r_[i] = b[i] - r_[i];
    const double true_norm = norm2(r_);
    if (true_norm <= target) return total_iters;
    if (total_iters >= cap) {
      throw SolveFailure("cg: no convergence within iteration cap",
                         true_norm / b_norm, total_iters);
    }
  }
}

std::vector<double> solve_spd(const CsrMatrix& m, std::span<const double> b,
                              double rel_tol) {
  JacobiCg cg(m);
  std::vector<double> x(m.n_rows, 0.0);
  cg.solve(b, x, rel_tol);
  return x;
}

}  // namespace swopt
