#include <gtest/gtest.h>

#include <random>

#include "awstokes/polynomial.hpp"
#include "awstokes/quadrature.hpp"
#include "test_support.hpp"

using namespace awstokes;
using namespace awstokes::testing;

TEST(Quadrature, WeightsSumToOne) {
  for (int q : {1, 4, 8, 12}) {
    const QuadRule r = triangle_rule(q);
    double s = 0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 1.0, 1e-14) << "degree " << q;
  }
  EXPECT_GE(default_rule().degree, 8);
}

TEST(Quadrature, ConstantGivesArea) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const TriangleGeom k = random_triangle(rng);
    EXPECT_NEAR(integrate(k, Poly2::constant(1.0)), k.area(), 1e-14 * k.area());
  }
}

TEST(Quadrature, ReferenceMonomials) {
  const TriangleGeom ref{{Point(0, 0), Point(1, 0), Point(0, 1)}};
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b) {
      const double expected = factorial(a) * factorial(b) / factorial(a + b + 2);
      EXPECT_NEAR(integrate(ref, Poly2::monomial(a, b)), expected, 1e-15) << a << "," << b;
    }
}

TEST(Quadrature, EveryMonomialOnRandomTriangles) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    const TriangleGeom k = random_triangle(rng);
    for (int a = 0; a <= 8; ++a)
      for (int b = 0; a + b <= 8; ++b) {
        const double expected = exact_integral(k, {{{a, b}, 1.0}});
        const double got = integrate(k, Poly2::monomial(a, b));
        EXPECT_NEAR(got, expected, 1e-12 * std::max(1.0, std::abs(expected))) << a << "," << b;
      }
  }
}

TEST(Quadrature, RandomDegreeEightPolynomial) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int i = 0; i < 10; ++i) {
    const TriangleGeom k = random_triangle(rng);
    TermMap p;
    Poly2 poly(8);
    for (int a = 0; a <= 8; ++a)
      for (int b = 0; a + b <= 8; ++b) {
        const double c = n(rng);
        p[{a, b}] = c;
        poly.coeff(a, b) = c;
      }
    const double expected = exact_integral(k, p);
    const double scale = exact_integral(k, [&] {
      TermMap abs_p;
      for (auto& [e, c] : p) abs_p[e] = std::abs(c);
      return abs_p;
    }());
    EXPECT_NEAR(integrate(k, poly), expected, 1e-12 * std::max(std::abs(expected), std::abs(scale)));
  }
}

TEST(Quadrature, FramedPolynomialMatchesPhysical) {
  std::mt19937_64 rng(4);
  const TriangleGeom k = random_triangle(rng);
  const Frame f = k.frame();
  // (xi_x)^2 * xi_y in the frame equals ((x - cx)/h)^2 (y - cy)/h.
  const Poly2 p = Poly2::monomial(2, 1, f);
  const double h = f.scale, cx = f.center.x(), cy = f.center.y();
  TermMap phys;
  const TermMap xm{{{1, 0}, 1.0 / h}, {{0, 0}, -cx / h}};
  const TermMap ym{{{0, 1}, 1.0 / h}, {{0, 0}, -cy / h}};
  phys = multiply(multiply(xm, xm), ym);
  EXPECT_NEAR(integrate(k, p), exact_integral(k, phys), 1e-13);
}

TEST(Quadrature, DegreeAboveRuleThrows) {
  const TriangleGeom ref{{Point(0, 0), Point(1, 0), Point(0, 1)}};
  EXPECT_THROW(integrate(ref, Poly2::monomial(9, 0)), InvalidArgument);
}

TEST(EdgeQuadrature, ConstantAndLinear) {
  const Point a(0.3, -0.2), b(1.1, 0.4);
  const double h = (b - a).norm();
  const double one[] = {1.0};
  const double lin[] = {0.0, 1.0};
  EXPECT_NEAR(edge_integrate(a, b, one), h, 1e-15);
  EXPECT_NEAR(edge_integrate(a, b, lin), h * h / 2, 1e-15);
  EXPECT_NEAR(edge_integrate(a, b, Poly2::constant(1.0)), h, 1e-15);
}

TEST(EdgeQuadrature, RandomDegreeSixAgainstAntiderivative) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int i = 0; i < 10; ++i) {
    const Point a(n(rng), n(rng)), b(n(rng), n(rng));
    const double h = (b - a).norm();
    double c[7], expected = 0.0;
    for (int j = 0; j <= 6; ++j) {
      c[j] = n(rng);
      expected += c[j] * std::pow(h, j + 1) / (j + 1);
    }
    EXPECT_NEAR(edge_integrate(a, b, c), expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(EdgeQuadrature, ExactToDegreeSeven) {
  const Point a(0, 0), b(2, 0);
  const double c[8] = {0, 0, 0, 0, 0, 0, 0, 1.0};
  const double expected = std::pow(2.0, 8) / 8;
  EXPECT_NEAR(edge_integrate(a, b, c), expected, 1e-12 * expected);
}

// Green: int_K dp/dx = sum over edges of int_E p n_x.
TEST(Quadrature, GreenTheorem) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (int i = 0; i < 10; ++i) {
    const TriangleGeom k = random_triangle(rng);
    Poly2 p(6, k.frame());
    for (double& c : p.coeffs()) c = n(rng);
    const double lhs_x = integrate(k, p.dx());
    const double lhs_y = integrate(k, p.dy());
    double rhs_x = 0.0, rhs_y = 0.0;
    for (int e = 0; e < 3; ++e) {
      const Point a = k.p[static_cast<std::size_t>(e)], b = k.p[static_cast<std::size_t>((e + 1) % 3)];
      const Point t = (b - a) / (b - a).norm();
      const Point nrm(t.y(), -t.x());  // outward for counter-clockwise triangles
      const double ip = edge_integrate(a, b, p);
      rhs_x += ip * nrm.x();
      rhs_y += ip * nrm.y();
    }
    const double scale = std::abs(lhs_x) + std::abs(lhs_y) + 1.0;
    EXPECT_NEAR(lhs_x, rhs_x, 1e-12 * scale);
    EXPECT_NEAR(lhs_y, rhs_y, 1e-12 * scale);
  }
}
