#pragma once

#include <array>
#include <functional>
#include <vector>

#include "swopt/csr.hpp"

namespace swopt {

/// Friedrich-Keller triangulation of the unit square: nx nodes per dimension,
/// every grid cell split along the (+1,+1) diagonal. interior_map holds the
/// interior DOF index of each node, or -1 on the Dirichlet boundary.
struct TriMesh {
  int nx = 0;
  double h = 0.0;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> interior_map;
  int n_interior = 0;

  int node_index(int ix, int iy) const { return ix + nx * iy; }
};

/// Throws std::invalid_argument for nx < 3 (no interior DOFs).
TriMesh build_mesh(int nx);

struct FemMatrices {
  CsrMatrix mass;       // consistent P1 mass matrix
  CsrMatrix stiffness;  // P1 stiffness for -Laplace
};

/// P1 matrices restricted to interior DOFs (homogeneous Dirichlet rows and
/// columns eliminated).
FemMatrices assemble(const TriMesh& mesh);

/// Same matrices over all nx^2 nodes, before boundary elimination.
FemMatrices assemble_full(const TriMesh& mesh);

/// Pointwise evaluation of a scalar field at the interior node coordinates.
std::vector<double> interpolate_nodal(
    const TriMesh& mesh, const std::function<double(double, double)>& fn);

}  // namespace swopt
