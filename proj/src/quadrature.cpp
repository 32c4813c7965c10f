#include "awstokes/quadrature.hpp"

#include <algorithm>
#include <numbers>

namespace awstokes {

double TriangleGeom::signed_area() const {
  const Point a = p[1] - p[0];
  const Point b = p[2] - p[0];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double TriangleGeom::diameter() const {
  return std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
}

double TriangleGeom::min_angle() const {
  double smallest = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const Point u = p[(i + 1) % 3] - p[i];
    const Point v = p[(i + 2) % 3] - p[i];
    const double c = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
    smallest = std::min(smallest, std::acos(c));
  }
  return smallest;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

QuadRule triangle_rule(int degree) {
  if (degree < 0) throw InvalidArgument("triangle_rule: negative degree");
  // The collapsed integrand carries an extra factor (1 - s), one degree more in s.
  const int n = (degree + 2 + 1) / 2;
  const GaussRule g = gauss_legendre(n);
  QuadRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (1.0 + g.nodes[static_cast<std::size_t>(i)]);
    const double ws = 0.5 * g.weights[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (1.0 + g.nodes[static_cast<std::size_t>(j)]);
      const double wt = 0.5 * g.weights[static_cast<std::size_t>(j)];
      const double xi = s;
      const double eta = t * (1.0 - s);
      rule.points.push_back({1.0 - xi - eta, xi, eta});
      // Reference area is 1/2; normalize so weights sum to one.
      rule.weights.push_back(2.0 * ws * wt * (1.0 - s));
    }
  }
  return rule;
}

const QuadRule& default_rule() {
  static const QuadRule rule = triangle_rule(kDefaultQuadratureDegree);
  return rule;
}

const GaussRule& default_edge_rule() {
  static const GaussRule rule = gauss_legendre((kDefaultEdgeDegree + 2) / 2);
  return rule;
}

ElementQuadrature::ElementQuadrature(const TriangleGeom& k, const QuadRule& rule) {
  const double area = k.area();
  points.reserve(rule.size());
  weights.reserve(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    points.push_back(k.from_barycentric(rule.points[q]));
    weights.push_back(rule.weights[q] * area);
  }
}

double integrate(const TriangleGeom& k, const Poly2& p, const QuadRule& rule) {
  if (p.degree() > rule.degree) throw InvalidArgument("integrate: polynomial degree exceeds quadrature exactness");
  return integrate_fn(k, [&](const Point& x) { return p(x); }, rule);
}

double edge_integrate(const Point& a, const Point& b, const Poly2& f, const GaussRule& rule) {
  if (f.degree() > 2 * static_cast<int>(rule.nodes.size()) - 1)
    throw InvalidArgument("edge_integrate: polynomial degree exceeds quadrature exactness");
  return edge_integrate_fn(a, b, [&](const Point& x, double) { return f(x); }, rule);
}

double edge_integrate(const Point& a, const Point& b, std::span<const double> coeffs_in_s, const GaussRule& rule) {
  if (static_cast<int>(coeffs_in_s.size()) - 1 > 2 * static_cast<int>(rule.nodes.size()) - 1)
    throw InvalidArgument("edge_integrate: polynomial degree exceeds quadrature exactness");
  const double h = (b - a).norm();
  return edge_integrate_fn(
      a, b,
      [&](const Point&, double t) {
        const double s = 0.5 * (1.0 + t) * h;
        double v = 0.0;
        for (auto it = coeffs_in_s.rbegin(); it != coeffs_in_s.rend(); ++it) v = v * s + *it;
        return v;
      },
      rule);
}

}  // namespace awstokes
