#include "awstokes/assembly.hpp"

#include <cstdio>
#include <ostream>

namespace awstokes {

DofMap build_dofmap(const Mesh& mesh) {
  DofMap d;
  d.n_vertices = mesh.num_vertices();
  d.n_edges = mesh.num_edges();
  d.n_triangles = mesh.num_triangles();
  d.n_sigma = 3 * d.n_vertices + 4 * d.n_edges + 3 * d.n_triangles;
  d.n_u = 6 * d.n_triangles;
  d.sigma.resize(static_cast<std::size_t>(d.n_triangles));
  for (int t = 0; t < d.n_triangles; ++t) {
    const Triangle& tri = mesh.triangles[static_cast<std::size_t>(t)];
    auto& map = d.sigma[static_cast<std::size_t>(t)];
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c) map[static_cast<std::size_t>(3 * i + c)] = d.vertex_dof(tri.v[static_cast<std::size_t>(i)], c);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) map[static_cast<std::size_t>(9 + 4 * i + k)] = d.edge_dof(tri.e[static_cast<std::size_t>(i)], k);
    for (int c = 0; c < 3; ++c) map[static_cast<std::size_t>(21 + c)] = d.interior_dof(t, c);
  }
  return d;
}

GlobalSystem assemble(const Mesh& mesh, double nu) {
  GlobalSystem g;
  g.nu = nu;
  g.dofs = build_dofmap(mesh);
  const int nt = mesh.num_triangles();
  g.bases.reserve(static_cast<std::size_t>(nt));

  std::vector<Eigen::Triplet<double>> ta, tb, tm;
  ta.reserve(static_cast<std::size_t>(nt) * 576);
  tb.reserve(static_cast<std::size_t>(nt) * 144);
  tm.reserve(static_cast<std::size_t>(nt) * 18);
  g.c = Eigen::VectorXd::Zero(g.dofs.n_sigma);
  for (int t = 0; t < nt; ++t) {
    g.bases.push_back(build_aw_basis(mesh, t));
    const LocalMatrices lm = local_matrices(g.bases.back(), nu);
    const auto& map = g.dofs.sigma[static_cast<std::size_t>(t)];
    for (int i = 0; i < AWBasis::kDofs; ++i) {
      for (int j = 0; j < AWBasis::kDofs; ++j)
        ta.emplace_back(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)], lm.A(i, j));
      g.c(map[static_cast<std::size_t>(i)]) += lm.C(i);
    }
    for (int r = 0; r < 6; ++r) {
      const int row = g.dofs.velocity_dof(t, r);
      for (int j = 0; j < AWBasis::kDofs; ++j) tb.emplace_back(row, map[static_cast<std::size_t>(j)], lm.B(r, j));
      for (int s = 0; s < 6; ++s)
        if (lm.M(r, s) != 0.0) tm.emplace_back(row, g.dofs.velocity_dof(t, s), lm.M(r, s));
    }
  }
  g.A.resize(g.dofs.n_sigma, g.dofs.n_sigma);
  g.A.setFromTriplets(ta.begin(), ta.end());
  g.B.resize(g.dofs.n_u, g.dofs.n_sigma);
  g.B.setFromTriplets(tb.begin(), tb.end());
  g.M.resize(g.dofs.n_u, g.dofs.n_u);
  g.M.setFromTriplets(tm.begin(), tm.end());
  return g;
}

ConstrainedSystem constrain(GlobalSystem system) {
  ConstrainedSystem cs;
  cs.system = std::move(system);
  const GlobalSystem& g = cs.system;
  const int ns = g.dofs.n_sigma;
  const int mult = ns;
  const int off = ns + 1;
  std::vector<Eigen::Triplet<double>> tk;
  tk.reserve(static_cast<std::size_t>(g.A.nonZeros() + 2 * g.B.nonZeros() + 2 * ns));
  for (int k = 0; k < g.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(g.A, k); it; ++it) tk.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < g.B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(g.B, k); it; ++it) {
      tk.emplace_back(off + it.row(), it.col(), it.value());
      tk.emplace_back(it.col(), off + it.row(), it.value());
    }
  for (int j = 0; j < ns; ++j)
    if (g.c(j) != 0.0) {
      tk.emplace_back(j, mult, g.c(j));
      tk.emplace_back(mult, j, g.c(j));
    }
  cs.K.resize(cs.size(), cs.size());
  cs.K.setFromTriplets(tk.begin(), tk.end());
  return cs;
}

void write_coo(std::ostream& os, const SparseMatrix& m) {
  char buf[64];
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      os << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
}

}  // namespace awstokes
