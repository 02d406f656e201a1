#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "swopt/cg.hpp"
#include "swopt/kernels.hpp"
#include "swopt/mesh.hpp"

using namespace swopt;

namespace {

double signed_area(const TriMesh& mesh, const std::array<int, 3>& tri) {
  const auto& a = mesh.nodes[tri[0]];
  const auto& b = mesh.nodes[tri[1]];
  const auto& c = mesh.nodes[tri[2]];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

}  // namespace

TEST_CASE("node, triangle and interior counts") {
  struct Row {
    int nx, nodes, triangles, interior;
  };
  for (const Row r : {Row{3, 9, 8, 1}, Row{4, 16, 18, 4},
                      Row{40, 1600, 3042, 1444}}) {
    const TriMesh mesh = build_mesh(r.nx);
    CHECK(static_cast<int>(mesh.nodes.size()) == r.nodes);
    CHECK(static_cast<int>(mesh.triangles.size()) == r.triangles);
    CHECK(mesh.n_interior == r.interior);
  }
  CHECK_THROWS_AS(build_mesh(2), std::invalid_argument);
}

TEST_CASE("every triangle has positive signed area h^2/2") {
  const TriMesh mesh = build_mesh(7);
  const double expected = 0.5 * mesh.h * mesh.h;
  for (const auto& tri : mesh.triangles) {
    CHECK(signed_area(mesh, tri) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("boundary nodes are exactly those touching the unit-square edge") {
  const TriMesh mesh = build_mesh(9);
  for (std::size_t g = 0; g < mesh.nodes.size(); ++g) {
    const auto [x, y] = mesh.nodes[g];
    const bool on_boundary = std::abs(x) < 1e-12 ||
                             std::abs(x - 1.0) < 1e-12 ||
                             std::abs(y) < 1e-12 || std::abs(y - 1.0) < 1e-12;
    CHECK((mesh.interior_map[g] < 0) == on_boundary);
  }
}

TEST_CASE("nx=3 single interior node: stiffness 4, mass h^2/2") {
  const TriMesh mesh = build_mesh(3);
  const FemMatrices fem = assemble(mesh);
  REQUIRE(fem.stiffness.n_rows == 1);
  CHECK(fem.stiffness.value_at(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(fem.mass.value_at(0, 0) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("full mass rows sum to the domain area, stiffness kills constants") {
  const TriMesh mesh = build_mesh(11);
  const FemMatrices fem = assemble_full(mesh);
  const int n = fem.mass.n_rows;
  const std::vector<double> ones(n, 1.0);
  const auto m_ones = spmv(fem.mass, ones);
  double total = 0.0;
  for (double v : m_ones) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

  const auto a_ones = spmv(fem.stiffness, ones);
  for (double v : a_ones) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("interior stiffness is SPD on random vectors") {
  const TriMesh mesh = build_mesh(12);
  const FemMatrices fem = assemble(mesh);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> u(fem.stiffness.n_rows);
    for (double& v : u) v = uni(rng);
    CHECK(kernels::dot(u, spmv(fem.stiffness, u)) > 0.0);
  }
}

TEST_CASE("interpolate_nodal evaluates at interior coordinates") {
  const TriMesh mesh = build_mesh(3);
  CHECK(interpolate_nodal(mesh, [](double, double) { return 0.0; }) ==
        std::vector<double>{0.0});
  CHECK(interpolate_nodal(mesh, [](double x, double) { return x; }) ==
        std::vector<double>{0.5});
  // the Gaussian form function peaks with value 10 at the center node
  const auto psi = interpolate_nodal(mesh, [](double x1, double x2) {
    const double d1 = x1 - 0.5, d2 = x2 - 0.5;
    return 10.0 * std::exp(-2.0 * (d1 * d1 + d2 * d2));
  });
  CHECK(psi[0] == doctest::Approx(10.0).epsilon(1e-14));
}

namespace {

// Nodal max error of the discrete Poisson solve A u = M f against the
// manufactured solution sin(pi x) sin(pi y).
double poisson_max_error(int nx) {
  const TriMesh mesh = build_mesh(nx);
  const FemMatrices fem = assemble(mesh);
  const double pi = std::numbers::pi;
  const auto f = interpolate_nodal(mesh, [pi](double x, double y) {
    return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
  });
  const auto exact = interpolate_nodal(mesh, [pi](double x, double y) {
    return std::sin(pi * x) * std::sin(pi * y);
  });
  const auto u = solve_spd(fem.stiffness, spmv(fem.mass, f), 1e-13);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    err = std::max(err, std::abs(u[i] - exact[i]));
  }
  return err;
}

}  // namespace

TEST_CASE("Poisson manufactured solution converges at second order") {
  const double coarse = poisson_max_error(20);
  const double fine = poisson_max_error(40);
  const double ratio = coarse / fine;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}
