#pragma once

#include <array>
#include <vector>

#include "awstokes/polynomial.hpp"
#include "awstokes/types.hpp"

namespace awstokes {

/// Three vertices of a (counter-clockwise) triangle.
struct TriangleGeom {
  std::array<Point, 3> p;

  double signed_area() const;
  double area() const { return std::abs(signed_area()); }
  Point centroid() const { return (p[0] + p[1] + p[2]) / 3.0; }
  /// Longest edge length.
  double diameter() const;
  /// Smallest interior angle in radians.
  double min_angle() const;
  Point from_barycentric(const std::array<double, 3>& l) const { return l[0] * p[0] + l[1] * p[1] + l[2] * p[2]; }
  /// Centroid-centered frame scaled by the diameter.
  Frame frame() const { return {centroid(), diameter()}; }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Triangle rule in barycentric coordinates; weights sum to one.
struct QuadRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Conical-product (collapsed Gauss) rule exact for total degree <= degree.
QuadRule triangle_rule(int degree);

constexpr int kDefaultQuadratureDegree = 8;
constexpr int kDefaultEdgeDegree = 7;

/// Degree-8 rule shared by all element integrals.
const QuadRule& default_rule();

/// 1D rule on [-1, 1] exact for degree 7.
const GaussRule& default_edge_rule();

/// Quadrature points mapped to a physical triangle, weights scaled by its area.
struct ElementQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;

  ElementQuadrature(const TriangleGeom& k, const QuadRule& rule);
  std::size_t size() const { return weights.size(); }
};

/// Integral of p over K. Throws InvalidArgument if p's degree exceeds the rule.
double integrate(const TriangleGeom& k, const Poly2& p, const QuadRule& rule = default_rule());

template <class F>
double integrate_fn(const TriangleGeom& k, F&& f, const QuadRule& rule = default_rule()) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(k.from_barycentric(rule.points[q]));
  return sum * k.area();
}

/// Integral over the segment [a, b] of a polynomial restricted to it.
double edge_integrate(const Point& a, const Point& b, const Poly2& f, const GaussRule& rule = default_edge_rule());

/// Integral over [a, b] of a polynomial in the arc-length parameter s in [0, |b - a|],
/// coefficients in increasing powers of s.
double edge_integrate(const Point& a, const Point& b, std::span<const double> coeffs_in_s,
                      const GaussRule& rule = default_edge_rule());

/// f is called as f(point, t) with t in [-1, 1] running from a to b.
template <class F>
double edge_integrate_fn(const Point& a, const Point& b, F&& f, const GaussRule& rule = default_edge_rule()) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = rule.nodes[q];
    sum += rule.weights[q] * f(Point(0.5 * (1.0 - t) * a + 0.5 * (1.0 + t) * b), t);
  }
  return 0.5 * (b - a).norm() * sum;
}

}  // namespace awstokes
