#include "swopt/mesh.hpp"

#include <stdexcept>

namespace swopt {

TriMesh build_mesh(int nx) {
  if (nx < 3) {
    throw std::invalid_argument("build_mesh: nx < 3 leaves no interior DOFs");
  }
  TriMesh mesh;
  mesh.nx = nx;
  mesh.h = 1.0 / (nx - 1);
  mesh.nodes.reserve(static_cast<std::size_t>(nx) * nx);
  mesh.interior_map.assign(static_cast<std::size_t>(nx) * nx, -1);
  for (int iy = 0; iy < nx; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      mesh.nodes.push_back({ix * mesh.h, iy * mesh.h});
      if (ix > 0 && ix < nx - 1 && iy > 0 && iy < nx - 1) {
        mesh.interior_map[mesh.node_index(ix, iy)] = mesh.n_interior++;
      }
    }
  }
  mesh.triangles.reserve(2u * (nx - 1) * (nx - 1));
  for (int iy = 0; iy < nx - 1; ++iy) {
    for (int ix = 0; ix < nx - 1; ++ix) {
      const int v00 = mesh.node_index(ix, iy);
      const int v10 = mesh.node_index(ix + 1, iy);
      const int v01 = mesh.node_index(ix, iy + 1);
      const int v11 = mesh.node_index(ix + 1, iy + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

namespace {

// Element matrices for a P1 triangle with vertices p0, p1, p2 (positive
// orientation). Mass: (area/12) [[2,1,1],[1,2,1],[1,1,2]]. Stiffness from
// the constant gradients of the barycentric basis.
struct ElementMatrices {
  std::array<std::array<double, 3>, 3> mass;
  std::array<std::array<double, 3>, 3> stiffness;
};

ElementMatrices element_matrices(const std::array<double, 2>& p0,
                                 const std::array<double, 2>& p1,
                                 const std::array<double, 2>& p2) {
  const double det =
      (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  const double area = 0.5 * det;
  // grad(phi_i) = perpendicular of the opposite edge / det
  const std::array<std::array<double, 2>, 3> grad = {{
      {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det},
      {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
      {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det},
  }};
  ElementMatrices em;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      em.mass[a][b] = area / 12.0 * (a == b ? 2.0 : 1.0);
      em.stiffness[a][b] =
          area * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
    }
  }
  return em;
}

FemMatrices assemble_impl(const TriMesh& mesh, bool interior_only) {
  const int n = interior_only ? mesh.n_interior
                              : static_cast<int>(mesh.nodes.size());
  std::vector<Triplet> mass_t, stiff_t;
  mass_t.reserve(9 * mesh.triangles.size());
  stiff_t.reserve(9 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    const auto em = element_matrices(mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                                     mesh.nodes[tri[2]]);
    for (int a = 0; a < 3; ++a) {
      const int ga = interior_only ? mesh.interior_map[tri[a]] : tri[a];
      if (ga < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int gb = interior_only ? mesh.interior_map[tri[b]] : tri[b];
        if (gb < 0) continue;
        mass_t.push_back({ga, gb, em.mass[a][b]});
        stiff_t.push_back({ga, gb, em.stiffness[a][b]});
      }
    }
  }
  FemMatrices out;
  out.mass = csr_from_triplets(n, n, std::move(mass_t), true);
  out.stiffness = csr_from_triplets(n, n, std::move(stiff_t), true);
  return out;
}

}  // namespace

FemMatrices assemble(const TriMesh& mesh) { return assemble_impl(mesh, true); }

FemMatrices assemble_full(const TriMesh& mesh) {
  return assemble_impl(mesh, false);
}

std::vector<double> interpolate_nodal(
    const TriMesh& mesh, const std::function<double(double, double)>& fn) {
  std::vector<double> out(mesh.n_interior);
  for (std::size_t g = 0; g < mesh.nodes.size(); ++g) {
    const int dof = mesh.interior_map[g];
    if (dof >= 0) out[dof] = fn(mesh.nodes[g][0], mesh.nodes[g][1]);
  }
  return out;
}

}  // namespace swopt
