#pragma once

#include <cstddef>
#include <span>

namespace swopt::kernels {

// Raw CSR/vector kernels shared by the solver stack. Every kernel has a
// serial reference implementation and an OpenMP variant; the dispatching
// front-ends pick one based on problem size. The parallel spmv assigns whole
// rows to threads, so it is bitwise identical to the serial version; dot
// products reduce in a thread-dependent order and agree only up to rounding.

void spmv_serial(std::span<const int> row_offsets,
                 std::span<const int> col_indices,
                 std::span<const double> values,
                 std::span<const double> x, std::span<double> y);

void spmv_parallel(std::span<const int> row_offsets,
                   std::span<const int> col_indices,
                   std::span<const double> values,
                   std::span<const double> x, std::span<double> y);

double dot_serial(std::span<const double> a, std::span<const double> b);
double dot_parallel(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);
void axpy_parallel(double alpha, std::span<const double> x, std::span<double> y);

// x *= alpha; x += y  (scal-then-add, the p-update of CG)
void xpay_serial(double alpha, std::span<const double> y, std::span<double> x);
void xpay_parallel(double alpha, std::span<const double> y, std::span<double> x);

// Size thresholds below which threading costs more than it saves; the
// crossover sits near 16k rows on the reference box (see bench_kernels), so
// both experiment presets run the serial kernels and parallelism comes from
// concurrent solves instead.
inline constexpr std::size_t spmv_parallel_min_rows = 1u << 14;
inline constexpr std::size_t vec_parallel_min_size = 1u << 17;

void spmv(std::span<const int> row_offsets, std::span<const int> col_indices,
          std::span<const double> values, std::span<const double> x,
          std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpay(double alpha, std::span<const double> y, std::span<double> x);

}  // namespace swopt::kernels
