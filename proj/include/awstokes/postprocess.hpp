#pragma once

#include <vector>

#include <Eigen/Core>

#include "awstokes/fields.hpp"
#include "awstokes/mesh.hpp"

namespace awstokes {

/// Local reconstruction on one element: the vector field u* of the given
/// degree with (eps(u*), eps(v)) = (A sigma, eps(v)) for all v, and with its
/// L2 projection onto P1 equal to u_h. mu is the P1 multiplier (coefficients
/// of 1, xi, eta in the element frame, per component).
struct LocalPost {
  VectorPiece u;
  Eigen::Matrix<double, 3, 2> mu = Eigen::Matrix<double, 3, 2>::Zero();
  double residual = 0.0;  ///< relative residual of the local solve
};

LocalPost postprocess_element(const TriangleGeom& k, const StressPiece& sigma, const VectorPiece& uh,
                              double nu = 1.0, int degree = 3);

struct PostField {
  PiecewiseVector u;
  std::vector<Eigen::Matrix<double, 3, 2>> mu;
  double max_residual = 0.0;
};

PostField postprocess(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& uh,
                      double nu = 1.0, int degree = 3);

/// -(div sigma, w) / (w, w). Throws InvalidArgument when (w, w) vanishes.
double rayleigh_quotient(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& w);

/// Continuous P3 average of a piecewise cubic field.
///
/// Lagrange nodes are the vertices, two nodes per edge at 1/3 and 2/3 along
/// the global edge orientation, and the centroid. Shared nodes take the
/// unweighted mean of the element values, boundary nodes (both sides of the
/// slit included) are set to zero and centroid values are copied.
struct ConformingField {
  std::vector<Vec2> vertex;
  std::vector<std::array<Vec2, 2>> edge;
  std::vector<Vec2> interior;

  /// Elementwise monomial representation in each element frame.
  PiecewiseVector to_piecewise(const Mesh& mesh) const;
};

ConformingField conforming_average(const Mesh& mesh, const PiecewiseVector& w);

/// p = -tr(sigma) / 2 elementwise.
PiecewiseScalar pressure(const PiecewiseStress& sigma);

}  // namespace awstokes
