#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "awstokes/aw_element.hpp"
#include "awstokes/mesh.hpp"

namespace awstokes {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Global numbering: vertex stress values first (3 per vertex), then edge
/// moments (4 per edge), then element means (3 per triangle). Velocities are
/// discontinuous P1, 6 per triangle.
struct DofMap {
  int n_vertices = 0;
  int n_edges = 0;
  int n_triangles = 0;
  int n_sigma = 0;
  int n_u = 0;
  std::vector<std::array<int, AWBasis::kDofs>> sigma;

  int total() const { return n_sigma + n_u; }
  int vertex_dof(int v, int c) const { return 3 * v + c; }
  int edge_dof(int e, int k) const { return 3 * n_vertices + 4 * e + k; }
  int interior_dof(int t, int c) const { return 3 * n_vertices + 4 * n_edges + 3 * t + c; }
  int velocity_dof(int t, int i) const { return 6 * t + i; }
};

DofMap build_dofmap(const Mesh& mesh);

struct GlobalSystem {
  DofMap dofs;
  std::vector<AWBasis> bases;
  SparseMatrix A;     ///< n_sigma x n_sigma
  SparseMatrix B;     ///< n_u x n_sigma
  SparseMatrix M;     ///< n_u x n_u, block diagonal
  Eigen::VectorXd c;  ///< integral of tr phi_j over the domain
  double nu = 1.0;
};

/// Builds element bases and assembles all blocks in ascending element order.
GlobalSystem assemble(const Mesh& mesh, double nu = 1.0);

/// Global stress coefficients of a field, obtained by applying the DOF
/// functionals elementwise. Exact for fields in the discrete space.
template <class F>
Eigen::VectorXd interpolate_stress(const Mesh& mesh, const DofMap& dofs, F&& field) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs.n_sigma);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto d = apply_dofs(mesh.geometry(t), mesh.edge_orientation(t), field);
    for (int j = 0; j < AWBasis::kDofs; ++j) x(dofs.sigma[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]) = d(j);
  }
  return x;
}

/// Saddle-point matrix with the mean-trace constraint as a bordered multiplier:
///
///   [ A   c   B^T ]
///   [ c^T 0   0   ]
///   [ B   0   0   ]
///
/// Unknown order: stress (n_sigma), multiplier (1), velocity (n_u).
struct ConstrainedSystem {
  GlobalSystem system;
  SparseMatrix K;

  int n_sigma() const { return system.dofs.n_sigma; }
  int n_u() const { return system.dofs.n_u; }
  int multiplier() const { return n_sigma(); }
  int velocity_offset() const { return n_sigma() + 1; }
  int size() const { return n_sigma() + 1 + n_u(); }
};

ConstrainedSystem constrain(GlobalSystem system);

/// Coordinate text export: one "row col value" line per stored entry (0-based).
void write_coo(std::ostream& os, const SparseMatrix& m);

}  // namespace awstokes
