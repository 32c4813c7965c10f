#pragma once

#include <span>
#include <vector>

#include "awstokes/types.hpp"

namespace awstokes {

/// Number of monomials x^a y^b with a + b <= degree.
constexpr int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Position of x^a y^b in the graded ordering 1, x, y, x^2, xy, y^2, ...
constexpr int monomial_index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

/// Affine local coordinates xi = (x - center) / scale.
///
/// Element polynomials are stored in centroid-centered coordinates scaled by
/// the element diameter, which keeps monomial bases well conditioned on
/// small triangles. The default frame is the identity (physical coordinates).
struct Frame {
  Point center = Point::Zero();
  double scale = 1.0;

  Point local(const Point& x) const { return (x - center) / scale; }
  bool operator==(const Frame& o) const { return center == o.center && scale == o.scale; }
};

/// Evaluates all monomials of total degree <= degree at local point xi.
void evaluate_monomials(int degree, const Point& xi, std::span<double> out);

/// Same, plus the derivatives with respect to the *physical* coordinates.
void evaluate_monomials(const Frame& frame, int degree, const Point& x, std::span<double> value,
                        std::span<double> dx, std::span<double> dy);

/// Bivariate polynomial over the monomial basis in a given frame.
class Poly2 {
 public:
  Poly2() : Poly2(0) {}
  explicit Poly2(int degree, Frame frame = {});
  Poly2(int degree, Frame frame, std::vector<double> coeffs);

  static Poly2 constant(double c, Frame frame = {});
  static Poly2 monomial(int a, int b, Frame frame = {});

  int degree() const { return degree_; }
  const Frame& frame() const { return frame_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double coeff(int a, int b) const;
  double& coeff(int a, int b);

  double operator()(const Point& x) const;

  Poly2 dx() const;
  Poly2 dy() const;

  /// Same polynomial expressed with a larger degree (zero padded).
  Poly2 elevated(int degree) const;

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  Poly2& operator*=(double s);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(double s, Poly2 a) { return a *= s; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);

 private:
  void require_same_frame(const Poly2& o) const;

  int degree_;
  Frame frame_;
  std::vector<double> coeffs_;
};

}  // namespace awstokes
