#pragma once

#include <array>

#include <Eigen/Core>

#include "awstokes/polynomial.hpp"
#include "awstokes/quadrature.hpp"
#include "awstokes/types.hpp"

namespace awstokes {

struct Mesh;

/// Deviatoric operator A tau = 1/2 (tau - 1/2 tr(tau) delta).
Sym2 deviator(const Sym2& tau);

/// Viscosity-scaled deviator 1/(2 nu) (tau - 1/2 tr(tau) delta); equals deviator(tau) for nu = 1.
Sym2 deviator(const Sym2& tau, double nu);

/// Lowest-order Arnold-Winther stress element: cubic symmetric fields with
/// linear divergence, 24 degrees of freedom.
///
/// Local DOF layout:
///   0..8    vertex i, component c (xx, xy, yy) at 3*i + c
///   9..20   local edge i (opposite vertex i) at 9 + 4*i + k with
///           k = 0,1: mean of (tau n)_x, (tau n)_y
///           k = 2,3: first Legendre moment of (tau n)_x, (tau n)_y
///   21..23  element means of xx, xy, yy
/// Edge functionals use the global edge orientation (lower vertex index first)
/// and its normal, so neighbouring triangles evaluate identical functionals.
struct AWBasis {
  static constexpr int kDofs = 24;
  static constexpr int kMonomials = 10;  // cubic
  static constexpr int kCoefficients = 3 * kMonomials;

  int triangle = -1;
  TriangleGeom geom;
  std::array<bool, 3> reversed{};
  Frame frame;
  /// Row c*10 + k holds monomial k of component c.
  Eigen::Matrix<double, kCoefficients, kDofs> coef;
  /// 2-norm condition number of the DOF-functional matrix.
  double condition = 0.0;

  Sym2 value(int j, const Point& x) const;
  Vec2 divergence(int j, const Point& x) const;
  /// Components (xx, xy, yy) of shape function j as polynomials.
  std::array<Poly2, 3> shape(int j) const;
};

/// Global-orientation view of local edge i: runs from a to b with normal n.
struct EdgeFrame {
  Point a;
  Point b;
  Vec2 normal;
  double length;
};

EdgeFrame local_edge(const TriangleGeom& k, const std::array<bool, 3>& reversed, int i);

/// Applies the 24 DOF functionals to a symmetric field given as a callable x -> Sym2.
template <class F>
Eigen::Matrix<double, AWBasis::kDofs, 1> apply_dofs(const TriangleGeom& k, const std::array<bool, 3>& reversed,
                                                    F&& field) {
  Eigen::Matrix<double, AWBasis::kDofs, 1> d;
  for (int i = 0; i < 3; ++i) {
    const Sym2 s = field(k.p[static_cast<std::size_t>(i)]);
    d(3 * i) = s.xx;
    d(3 * i + 1) = s.xy;
    d(3 * i + 2) = s.yy;
  }
  const GaussRule& g = default_edge_rule();
  for (int i = 0; i < 3; ++i) {
    const EdgeFrame e = local_edge(k, reversed, i);
    Eigen::Vector4d m = Eigen::Vector4d::Zero();
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double t = g.nodes[q];
      const Vec2 tn = field(Point(0.5 * (1.0 - t) * e.a + 0.5 * (1.0 + t) * e.b)).apply(e.normal);
      const double w = 0.5 * g.weights[q];
      m += w * Eigen::Vector4d(tn.x(), tn.y(), t * tn.x(), t * tn.y());
    }
    d.segment<4>(9 + 4 * i) = m;
  }
  const QuadRule& rule = default_rule();
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Sym2 s = field(k.from_barycentric(rule.points[q]));
    mean += rule.weights[q] * Eigen::Vector3d(s.xx, s.xy, s.yy);
  }
  d.segment<3>(21) = mean;
  return d;
}

/// Builds the nodal basis dual to the DOF functionals. Throws GeometryError when
/// the functional matrix is ill-conditioned (condition number > 1e10).
AWBasis build_aw_basis(const TriangleGeom& k, const std::array<bool, 3>& reversed, int triangle = -1);
AWBasis build_aw_basis(const Mesh& mesh, int t);

/// Rank of the 6x30 constraint killing the quadratic part of div tau, and the
/// dimension of the remaining space. Both are independent of the triangle in
/// element-frame coordinates.
struct ConstraintRank {
  int rank = 0;
  int nullity = 0;
};
ConstraintRank divergence_constraint_rank();

/// Velocity shape functions are lambda_a e_c at local index 3*c + a.
struct LocalMatrices {
  Eigen::Matrix<double, 24, 24> A;  ///< (A phi_j, phi_i)
  Eigen::Matrix<double, 6, 24> B;   ///< (div phi_j, v_i)
  Eigen::Matrix<double, 6, 6> M;    ///< (v_j, v_i)
  Eigen::Matrix<double, 24, 1> C;   ///< integral of tr phi_j
};

LocalMatrices local_matrices(const AWBasis& basis, double nu = 1.0);

}  // namespace awstokes
