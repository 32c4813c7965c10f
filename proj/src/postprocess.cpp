#include "awstokes/postprocess.hpp"

#include <algorithm>
#include <array>

#include <Eigen/Dense>

#include "awstokes/aw_element.hpp"
#include "awstokes/quadrature.hpp"

namespace awstokes {

namespace {

constexpr int kMaxMonomials = 45;

}  // namespace

LocalPost postprocess_element(const TriangleGeom& k, const StressPiece& sigma, const VectorPiece& uh, double nu,
                              int degree) {
  if (degree < 1 || degree > 8) throw InvalidArgument("postprocess_element: degree must lie in [1, 8]");
  const int np = monomial_count(degree);
  const int nv = 2 * np;
  const int n = nv + 6;
  const Frame frame = k.frame();
  const QuadRule& rule = degree <= 4 ? default_rule() : triangle_rule(2 * degree);

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::array<double, kMaxMonomials> m{}, dx{}, dy{};
  std::array<double, 3> p1{};
  const double area = k.area();
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const Point x = k.from_barycentric(rule.points[q]);
    const double w = rule.weights[q] * area;
    evaluate_monomials(frame, degree, x, m, dx, dy);
    const Point xi = frame.local(x);
    p1 = {1.0, xi.x(), xi.y()};
    const Sym2 a = deviator(sigma.value(x), nu);
    const Vec2 u = uh.value(x);
    for (int i = 0; i < np; ++i) {
      // eps((phi, 0)) = [phi_x, phi_y / 2; ., 0] and eps((0, phi)) = [0, phi_x / 2; ., phi_y]
      for (int j = 0; j < np; ++j) {
        lhs(i, j) += w * (dx[i] * dx[j] + 0.5 * dy[i] * dy[j]);
        lhs(i, np + j) += w * 0.5 * dy[i] * dx[j];
        lhs(np + i, j) += w * 0.5 * dx[i] * dy[j];
        lhs(np + i, np + j) += w * (0.5 * dx[i] * dx[j] + dy[i] * dy[j]);
      }
      rhs(i) += w * (a.xx * dx[i] + a.xy * dy[i]);
      rhs(np + i) += w * (a.xy * dx[i] + a.yy * dy[i]);
      for (int c = 0; c < 3; ++c) {
        const double pm = w * p1[static_cast<std::size_t>(c)] * m[static_cast<std::size_t>(i)];
        lhs(nv + c, i) += pm;
        lhs(nv + 3 + c, np + i) += pm;
      }
    }
    for (int c = 0; c < 3; ++c) {
      rhs(nv + c) += w * p1[static_cast<std::size_t>(c)] * u.x();
      rhs(nv + 3 + c) += w * p1[static_cast<std::size_t>(c)] * u.y();
    }
  }
  // The strain block is O(1) in the element frame while the constraint block is O(|K|); rescale
  // the constraint rows and columns symmetrically so both are O(1) on small elements.
  const double s = 1.0 / area;
  lhs.bottomLeftCorner(6, nv) *= s;
  rhs.tail(6) *= s;
  lhs.topRightCorner(nv, 6) = lhs.bottomLeftCorner(6, nv).transpose();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible()) throw SolverError("postprocess_element: singular local system");
  const Eigen::VectorXd sol = lu.solve(rhs);
  LocalPost out;
  out.u = VectorPiece(frame, degree);
  out.u.coef.col(0) = sol.head(np);
  out.u.coef.col(1) = sol.segment(np, np);
  out.mu.col(0) = s * sol.segment<3>(nv);
  out.mu.col(1) = s * sol.segment<3>(nv + 3);
  const double scale = std::max(rhs.norm(), lhs.norm() * sol.norm());
  out.residual = scale > 0.0 ? (lhs * sol - rhs).norm() / scale : 0.0;
  return out;
}

PostField postprocess(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& uh, double nu,
                      int degree) {
  const auto nt = static_cast<std::size_t>(mesh.num_triangles());
  if (sigma.size() != nt || uh.size() != nt) throw InvalidArgument("postprocess: field size mismatch");
  PostField out;
  out.u.reserve(nt);
  out.mu.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    LocalPost p = postprocess_element(mesh.geometry(static_cast<int>(t)), sigma[t], uh[t], nu, degree);
    out.max_residual = std::max(out.max_residual, p.residual);
    out.u.push_back(std::move(p.u));
    out.mu.push_back(p.mu);
  }
  return out;
}

double rayleigh_quotient(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& w) {
  const double den = l2_inner(mesh, w, w);
  if (!(den > 0.0)) throw InvalidArgument("rayleigh_quotient: field has zero L2 norm");
  return -div_inner(mesh, sigma, w) / den;
}

ConformingField conforming_average(const Mesh& mesh, const PiecewiseVector& w) {
  if (w.size() != static_cast<std::size_t>(mesh.num_triangles()))
    throw InvalidArgument("conforming_average: field size mismatch");
  ConformingField out;
  out.vertex.assign(static_cast<std::size_t>(mesh.num_vertices()), Vec2::Zero());
  out.edge.assign(static_cast<std::size_t>(mesh.num_edges()), {Vec2::Zero(), Vec2::Zero()});
  out.interior.resize(static_cast<std::size_t>(mesh.num_triangles()));
  std::vector<int> vcount(out.vertex.size(), 0), ecount(out.edge.size(), 0);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const VectorPiece& piece = w[static_cast<std::size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      const auto v = static_cast<std::size_t>(tri.v[static_cast<std::size_t>(i)]);
      out.vertex[v] += piece.value(mesh.vertices[v]);
      ++vcount[v];
      const auto e = static_cast<std::size_t>(tri.e[static_cast<std::size_t>(i)]);
      const Edge& edge = mesh.edges[e];
      const Point& a = mesh.vertices[static_cast<std::size_t>(edge.v[0])];
      const Point& b = mesh.vertices[static_cast<std::size_t>(edge.v[1])];
      // Slit sides share coordinates but not edges, so each side averages only its own elements.
      out.edge[e][0] += piece.value(a + (b - a) / 3.0);
      out.edge[e][1] += piece.value(a + 2.0 * (b - a) / 3.0);
      ++ecount[e];
    }
    out.interior[static_cast<std::size_t>(t)] = piece.value(mesh.geometry(t).centroid());
  }

  const std::vector<bool> on_boundary = mesh.boundary_vertices();
  for (std::size_t v = 0; v < out.vertex.size(); ++v) {
    if (on_boundary[v] || vcount[v] == 0)
      out.vertex[v].setZero();
    else
      out.vertex[v] /= vcount[v];
  }
  for (std::size_t e = 0; e < out.edge.size(); ++e) {
    for (auto& node : out.edge[e]) {
      if (mesh.edges[e].boundary || ecount[e] == 0)
        node.setZero();
      else
        node /= ecount[e];
    }
  }
  return out;
}

PiecewiseVector ConformingField::to_piecewise(const Mesh& mesh) const {
  PiecewiseVector out;
  out.reserve(static_cast<std::size_t>(mesh.num_triangles()));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const TriangleGeom k = mesh.geometry(t);
    VectorPiece piece(k.frame(), 3);
    Eigen::Matrix<double, 10, 10> vander;
    Eigen::Matrix<double, 10, 2> values;
    std::array<double, 10> row{};
    int r = 0;
    auto add = [&](const Point& x, const Vec2& val) {
      evaluate_monomials(3, piece.frame.local(x), row);
      for (int j = 0; j < 10; ++j) vander(r, j) = row[static_cast<std::size_t>(j)];
      values.row(r) = val.transpose();
      ++r;
    };
    for (int i = 0; i < 3; ++i) {
      const auto v = static_cast<std::size_t>(tri.v[static_cast<std::size_t>(i)]);
      add(mesh.vertices[v], vertex[v]);
    }
    for (int i = 0; i < 3; ++i) {
      const auto e = static_cast<std::size_t>(tri.e[static_cast<std::size_t>(i)]);
      const Point& a = mesh.vertices[static_cast<std::size_t>(mesh.edges[e].v[0])];
      const Point& b = mesh.vertices[static_cast<std::size_t>(mesh.edges[e].v[1])];
      add(a + (b - a) / 3.0, edge[e][0]);
      add(a + 2.0 * (b - a) / 3.0, edge[e][1]);
    }
    add(k.centroid(), interior[static_cast<std::size_t>(t)]);
    piece.coef = vander.fullPivLu().solve(values);
    out.push_back(std::move(piece));
  }
  return out;
}

PiecewiseScalar pressure(const PiecewiseStress& sigma) {
  PiecewiseScalar out;
  out.reserve(sigma.size());
  for (const StressPiece& s : sigma) {
    Poly2 p(3, s.frame);
    for (int k = 0; k < 10; ++k) p.coeffs()[static_cast<std::size_t>(k)] = -0.5 * (s.coef(k, 0) + s.coef(k, 2));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace awstokes
