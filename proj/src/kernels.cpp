#include "swopt/kernels.hpp"

namespace swopt::kernels {

void spmv_serial(std::span<const int> row_offsets,
                 std::span<const int> col_indices,
                 std::span<const double> values,
                 std::span<const double> x, std::span<double> y) {
  const std::size_t n_rows = row_offsets.size() - 1;
  for (std::size_t i = 0; i < n_rows; ++i) {
    double acc = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      acc += values[k] * x[col_indices[k]];
    }
    y[i] = acc;
  }
}

void spmv_parallel(std::span<const int> row_offsets,
                   std::span<const int> col_indices,
                   std::span<const double> values,
                   std::span<const double> x, std::span<double> y) {
  const long n_rows = static_cast<long>(row_offsets.size()) - 1;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n_rows; ++i) {
    double acc = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      acc += values[k] * x[col_indices[k]];
    }
    y[i] = acc;
  }
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double dot_parallel(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (long i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpy_parallel(double alpha, std::span<const double> x,
                   std::span<double> y) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay_serial(double alpha, std::span<const double> y, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = alpha * x[i] + y[i];
}

void xpay_parallel(double alpha, std::span<const double> y,
                   std::span<double> x) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) x[i] = alpha * x[i] + y[i];
}

void spmv(std::span<const int> row_offsets, std::span<const int> col_indices,
          std::span<const double> values, std::span<const double> x,
          std::span<double> y) {
  if (row_offsets.size() - 1 >= spmv_parallel_min_rows) {
    spmv_parallel(row_offsets, col_indices, values, x, y);
  } else {
    spmv_serial(row_offsets, col_indices, values, x, y);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  return a.size() >= vec_parallel_min_size ? dot_parallel(a, b)
                                           : dot_serial(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() >= vec_parallel_min_size) {
    axpy_parallel(alpha, x, y);
  } else {
    axpy_serial(alpha, x, y);
  }
}

void xpay(double alpha, std::span<const double> y, std::span<double> x) {
  if (x.size() >= vec_parallel_min_size) {
    xpay_parallel(alpha, y, x);
  } else {
    xpay_serial(alpha, y, x);
  }
}

}  // namespace swopt::kernels
