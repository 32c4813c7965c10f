#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "awstokes/assembly.hpp"
#include "awstokes/mesh.hpp"
#include "awstokes/polynomial.hpp"

namespace awstokes {

/// Cubic symmetric tensor field on one triangle.
struct StressPiece {
  Frame frame;
  Eigen::Matrix<double, 10, 3> coef = Eigen::Matrix<double, 10, 3>::Zero();  ///< columns xx, xy, yy

  static StressPiece from_polys(const Poly2& xx, const Poly2& xy, const Poly2& yy);
  Sym2 value(const Point& x) const;
  Vec2 divergence(const Point& x) const;
};

/// Vector polynomial field of a given degree on one triangle.
struct VectorPiece {
  Frame frame;
  int degree = 0;
  Eigen::MatrixX2d coef;  ///< monomial_count(degree) x 2

  VectorPiece() = default;
  VectorPiece(Frame f, int deg) : frame(std::move(f)), degree(deg), coef(Eigen::MatrixX2d::Zero(monomial_count(deg), 2)) {}
  static VectorPiece from_polys(const Poly2& x, const Poly2& y);

  Vec2 value(const Point& x) const;
  /// Symmetric gradient.
  Sym2 strain(const Point& x) const;
};

using PiecewiseStress = std::vector<StressPiece>;
using PiecewiseVector = std::vector<VectorPiece>;
using PiecewiseScalar = std::vector<Poly2>;

/// Elementwise stress from global coefficients (the trailing multiplier, if present, is ignored).
PiecewiseStress stress_field(const GlobalSystem& system, const Eigen::VectorXd& sigma);

/// P1 piece from the six local velocity coefficients (lambda_a e_c at 3*c + a).
VectorPiece p1_piece(const TriangleGeom& k, const Eigen::Matrix<double, 6, 1>& local);
PiecewiseVector velocity_field(const Mesh& mesh, const Eigen::VectorXd& u);

/// (v, w) over the domain.
double l2_inner(const Mesh& mesh, const PiecewiseVector& v, const PiecewiseVector& w);
/// (div sigma, w) over the domain.
double div_inner(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& w);

/// One line per element: "t degree cx cy scale" followed by the x and y coefficient columns.
void write_field_table(std::ostream& os, const PiecewiseVector& field);

}  // namespace awstokes
