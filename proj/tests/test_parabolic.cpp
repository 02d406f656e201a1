#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "swopt/cg.hpp"
#include "swopt/heat.hpp"
#include "swopt/kernels.hpp"
#include "swopt/mesh.hpp"

using namespace swopt;

namespace {

struct Setup {
  TriMesh mesh;
  FemMatrices fem;
  TimeMesh tm;
  FormPattern pattern;

  Setup(int nx, int steps) : mesh(build_mesh(nx)), fem(assemble(mesh)) {
    tm = TimeMesh::uniform(1.0, steps);
    pattern.n_switch = 2;
    pattern.psi_nodal = interpolate_nodal(mesh, [](double x1, double x2) {
      const double d1 = x1 - 0.5, d2 = x2 - 0.5;
      return 10.0 * std::exp(-2.0 * (d1 * d1 + d2 * d2));
    });
  }

  int dofs() const { return fem.mass.n_rows; }
};

std::vector<double> random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = uni(rng);
  return v;
}

std::vector<std::vector<double>> random_loads(int steps, int dofs,
                                              std::mt19937_64& rng) {
  std::vector<std::vector<double>> loads(steps);
  for (auto& l : loads) l = random_vector(dofs, rng);
  return loads;
}

double m_norm(const FemMatrices& fem, const std::vector<double>& v) {
  return std::sqrt(kernels::dot(v, spmv(fem.mass, v)));
}

}  // namespace

TEST_CASE("zero data gives the zero trajectory") {
  Setup s(6, 10);
  const std::vector<double> tau{0.3, 0.3};  // empty on-interval
  const std::vector<double> y0(s.dofs(), 0.0);
  const auto y = forward_solve(tau, s.pattern, {}, y0, s.fem, s.tm, {});
  for (const auto& row : y.values) {
    for (double v : row) CHECK(v == 0.0);
  }
}

TEST_CASE("discrete steady state is a fixed point of the stepping") {
  Setup s(8, 15);
  std::mt19937_64 rng(5);
  const auto g = random_vector(s.dofs(), rng);
  const auto mg = spmv(s.fem.mass, g);
  const auto y0 = solve_spd(s.fem.stiffness, mg, 1e-13);  // A y0 = M g
  const std::vector<double> tau{0.2, 0.2};
  std::vector<std::vector<double>> loads(s.tm.steps(), mg);
  const auto y =
      forward_solve(tau, s.pattern, loads, y0, s.fem, s.tm, {}, 1e-13);
  for (int i = 0; i <= s.tm.steps(); ++i) {
    for (int d = 0; d < s.dofs(); ++d) {
      CHECK(y.values[i][d] == doctest::Approx(y0[d]).epsilon(1e-9));
    }
  }
}

TEST_CASE("unforced implicit Euler dissipates the M-norm strictly") {
  Setup s(7, 25);
  std::mt19937_64 rng(9);
  const auto y0 = random_vector(s.dofs(), rng);
  const std::vector<double> tau{0.5, 0.5};
  const auto y = forward_solve(tau, s.pattern, {}, y0, s.fem, s.tm, {});
  double prev = m_norm(s.fem, y.values[0]);
  for (int i = 1; i <= s.tm.steps(); ++i) {
    const double now = m_norm(s.fem, y.values[i]);
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("adjoint of zero residuals vanishes") {
  Setup s(6, 8);
  const std::vector<double> tau{0.1, 0.8};
  const std::vector<double> y0(s.dofs(), 0.0);
  const auto y = forward_solve(tau, s.pattern, {}, y0, s.fem, s.tm, {});
  const auto p = adjoint_solve(y, {}, s.fem, s.tm, {});
  for (const auto& row : p.values) {
    for (double v : row) CHECK(v == 0.0);
  }
}

TEST_CASE("adjoint is the exact transpose of the linearized forward map") {
  Setup s(7, 20);
  std::mt19937_64 rng(13);
  const std::vector<double> tau{0.25, 0.75};
  for (const auto kind :
       {Nonlinearity::Kind::zero, Nonlinearity::Kind::sine,
        Nonlinearity::Kind::arctan}) {
    const Nonlinearity f{kind};
    const auto y0 = random_vector(s.dofs(), rng);
    const auto base =
        forward_solve(tau, s.pattern, {}, y0, s.fem, s.tm, f, 1e-14);

    const auto h = random_loads(s.tm.steps(), s.dofs(), rng);
    const auto g = random_loads(s.tm.steps(), s.dofs(), rng);
    const auto dy = linearized_forward(base, h, s.fem, s.tm, f, 1e-14);
    const auto p = adjoint_solve(base, g, s.fem, s.tm, f, 1e-14);

    double forward_pairing = 0.0, adjoint_pairing = 0.0;
    double h_norm = 0.0, g_norm = 0.0;
    for (int i = 1; i <= s.tm.steps(); ++i) {
      forward_pairing += kernels::dot(g[i - 1], dy.values[i]);
      adjoint_pairing += kernels::dot(h[i - 1], p.values[i - 1]);
      h_norm += kernels::dot(h[i - 1], h[i - 1]);
      g_norm += kernels::dot(g[i - 1], g[i - 1]);
    }
    const double scale = std::sqrt(h_norm) * std::sqrt(g_norm);
    CHECK(std::abs(forward_pairing - adjoint_pairing) <= 1e-11 * scale);
  }
}

TEST_CASE("adjoint trajectory ends at zero") {
  Setup s(6, 9);
  std::mt19937_64 rng(17);
  const std::vector<double> tau{0.2, 0.7};
  const std::vector<double> y0(s.dofs(), 0.0);
  const auto y = forward_solve(tau, s.pattern, {}, y0, s.fem, s.tm, {});
  const auto g = random_loads(s.tm.steps(), s.dofs(), rng);
  const auto p = adjoint_solve(y, g, s.fem, s.tm, {});
  for (double v : p.values.back()) CHECK(v == 0.0);
}

TEST_CASE("evaluate_adjoint_at clamps and interpolates") {
  TimeMesh tm = TimeMesh::uniform(1.0, 4);
  Trajectory traj;
  traj.values.resize(5);
  for (int i = 0; i <= 4; ++i) traj.values[i] = {static_cast<double>(i), 2.0};

  SUBCASE("negative times evaluate at zero") {
    CHECK(evaluate_adjoint_at(traj, tm, -3.0)[0] == 0.0);
  }
  SUBCASE("beyond the horizon evaluates at T") {
    CHECK(evaluate_adjoint_at(traj, tm, 7.5)[0] == 4.0);
  }
  SUBCASE("grid nodes reproduce stored values") {
    for (int i = 0; i <= 4; ++i) {
      CHECK(evaluate_adjoint_at(traj, tm, tm.times[i])[0] ==
            doctest::Approx(static_cast<double>(i)));
    }
  }
  SUBCASE("midpoints give the arithmetic mean") {
    CHECK(evaluate_adjoint_at(traj, tm, 0.125)[0] == doctest::Approx(0.5));
    CHECK(evaluate_adjoint_at(traj, tm, 0.625)[0] == doctest::Approx(2.5));
  }
}
