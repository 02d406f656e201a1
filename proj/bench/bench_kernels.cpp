// Timing comparison of the serial reference kernels against their OpenMP
// variants, on synthetic 5-point-stencil matrices and on the two experiment
// presets. Prints a table of microseconds per call and the speedup; the
// dispatch thresholds in kernels.hpp were chosen from these numbers.

#include <omp.h>

#include <cstdio>
#include <random>
#include <vector>

#include "swopt/cg.hpp"
#include "swopt/csr.hpp"
#include "swopt/experiments.hpp"
#include "swopt/kernels.hpp"
#include "swopt/mesh.hpp"

namespace {

swopt::CsrMatrix laplacian_grid(int side) {
  std::vector<swopt::Triplet> t;
  const auto id = [side](int i, int j) { return i * side + j; };
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      t.push_back({id(i, j), id(i, j), 4.0});
      if (i > 0) t.push_back({id(i, j), id(i - 1, j), -1.0});
      if (i < side - 1) t.push_back({id(i, j), id(i + 1, j), -1.0});
      if (j > 0) t.push_back({id(i, j), id(i, j - 1), -1.0});
      if (j < side - 1) t.push_back({id(i, j), id(i, j + 1), -1.0});
    }
  }
  return swopt::csr_from_triplets(side * side, side * side, std::move(t));
}

template <typename F>
double time_per_call_us(F&& fn, int min_calls = 20) {
  fn();  // warm up
  const double t0 = omp_get_wtime();
  int calls = 0;
  while (omp_get_wtime() - t0 < 0.2 || calls < min_calls) {
    fn();
    ++calls;
  }
  return (omp_get_wtime() - t0) / calls * 1e6;
}

void bench_spmv(const char* label, const swopt::CsrMatrix& m) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> x(m.n_cols), y(m.n_rows);
  for (double& v : x) v = uni(rng);

  const double serial = time_per_call_us([&] {
    swopt::kernels::spmv_serial(m.row_offsets, m.col_indices, m.values, x, y);
  });
  const double parallel = time_per_call_us([&] {
    swopt::kernels::spmv_parallel(m.row_offsets, m.col_indices, m.values, x,
                                  y);
  });
  std::printf("  spmv %-18s %8d rows %9.2f us %9.2f us %6.2fx\n", label,
              m.n_rows, serial, parallel, serial / parallel);
}

void bench_dot(int n) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = uni(rng);
    b[i] = uni(rng);
  }
  volatile double sink = 0.0;
  const double serial =
      time_per_call_us([&] { sink = swopt::kernels::dot_serial(a, b); });
  const double parallel =
      time_per_call_us([&] { sink = swopt::kernels::dot_parallel(a, b); });
  (void)sink;
  std::printf("  dot  %-18d %8s      %9.2f us %9.2f us %6.2fx\n", n, "",
              serial, parallel, serial / parallel);
}

void bench_cg(const char* label, const swopt::CsrMatrix& m) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> b(m.n_rows);
  for (double& v : b) v = uni(rng);
  swopt::JacobiCg cg(m);
  std::vector<double> x(m.n_rows, 0.0);
  const double per_call = time_per_call_us(
      [&] {
        std::fill(x.begin(), x.end(), 0.0);
        cg.solve(b, x, 1e-12);
      },
      3);
  std::printf("  cg   %-18s %8d rows %9.1f us per cold solve\n", label,
              m.n_rows, per_call);
}

void bench_forward(const char* label, const swopt::Preset& preset) {
  const auto spec = swopt::spec_for(swopt::ExperimentCase::ii, preset);
  const swopt::Problem prob = swopt::make_problem(spec);
  const auto tau = swopt::reference_tau_opt();
  const double t0 = omp_get_wtime();
  const double obj = swopt::objective(tau, prob);
  const double dt = omp_get_wtime() - t0;
  std::printf("  forward solve + objective, %s preset: %.3f s (J = %.3e)\n",
              label, dt, obj);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-25s %13s %12s %12s %8s\n", "kernel", "size", "serial",
              "openmp", "speedup");

  for (int side : {18, 38, 128, 512, 1024}) {
    bench_spmv((std::to_string(side) + "x" + std::to_string(side)).c_str(),
               laplacian_grid(side));
  }
  for (int n : {1444, 1 << 14, 1 << 17, 1 << 20}) bench_dot(n);

  bench_cg("desk (18x18)", laplacian_grid(18));
  bench_cg("paper (38x38)", laplacian_grid(38));

  bench_forward("desk", swopt::desk_preset());
  bench_forward("paper", swopt::paper_preset());
  return 0;
}
