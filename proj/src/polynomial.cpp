#include "awstokes/polynomial.hpp"

#include <algorithm>
#include <cassert>

namespace awstokes {

namespace {

constexpr int kMaxDegree = 16;

void powers(double v, int degree, std::array<double, kMaxDegree + 1>& out) {
  out[0] = 1.0;
  for (int i = 1; i <= degree; ++i) out[i] = out[i - 1] * v;
}

}  // namespace

void evaluate_monomials(int degree, const Point& xi, std::span<double> out) {
  assert(degree <= kMaxDegree);
  assert(out.size() >= static_cast<std::size_t>(monomial_count(degree)));
  std::array<double, kMaxDegree + 1> px{}, py{};
  powers(xi.x(), degree, px);
  powers(xi.y(), degree, py);
  for (int n = 0; n <= degree; ++n)
    for (int b = 0; b <= n; ++b) out[monomial_index(n - b, b)] = px[n - b] * py[b];
}

void evaluate_monomials(const Frame& frame, int degree, const Point& x, std::span<double> value,
                        std::span<double> dx, std::span<double> dy) {
  assert(degree <= kMaxDegree);
  const Point xi = frame.local(x);
  std::array<double, kMaxDegree + 1> px{}, py{};
  powers(xi.x(), degree, px);
  powers(xi.y(), degree, py);
  const double inv = 1.0 / frame.scale;
  for (int n = 0; n <= degree; ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      const int k = monomial_index(a, b);
      value[k] = px[a] * py[b];
      dx[k] = a > 0 ? a * px[a - 1] * py[b] * inv : 0.0;
      dy[k] = b > 0 ? b * px[a] * py[b - 1] * inv : 0.0;
    }
  }
}

Poly2::Poly2(int degree, Frame frame)
    : degree_(degree), frame_(std::move(frame)), coeffs_(static_cast<std::size_t>(monomial_count(degree)), 0.0) {
  if (degree < 0 || degree > kMaxDegree) throw InvalidArgument("Poly2: degree out of range");
}

Poly2::Poly2(int degree, Frame frame, std::vector<double> coeffs) : Poly2(degree, std::move(frame)) {
  if (coeffs.size() != coeffs_.size()) throw InvalidArgument("Poly2: coefficient count does not match degree");
  coeffs_ = std::move(coeffs);
}

Poly2 Poly2::constant(double c, Frame frame) {
  Poly2 p(0, std::move(frame));
  p.coeffs_[0] = c;
  return p;
}

Poly2 Poly2::monomial(int a, int b, Frame frame) {
  Poly2 p(a + b, std::move(frame));
  p.coeff(a, b) = 1.0;
  return p;
}

double Poly2::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a + b > degree_) return 0.0;
  return coeffs_[monomial_index(a, b)];
}

double& Poly2::coeff(int a, int b) {
  if (a < 0 || b < 0 || a + b > degree_) throw InvalidArgument("Poly2: monomial outside degree");
  return coeffs_[monomial_index(a, b)];
}

double Poly2::operator()(const Point& x) const {
  std::array<double, monomial_count(kMaxDegree)> m{};
  evaluate_monomials(degree_, frame_.local(x), m);
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v += coeffs_[k] * m[k];
  return v;
}

Poly2 Poly2::dx() const {
  Poly2 d(std::max(degree_ - 1, 0), frame_);
  for (int n = 1; n <= degree_; ++n)
    for (int b = 0; b < n; ++b) {
      const int a = n - b;
      d.coeff(a - 1, b) = a * coeff(a, b) / frame_.scale;
    }
  return d;
}

Poly2 Poly2::dy() const {
  Poly2 d(std::max(degree_ - 1, 0), frame_);
  for (int n = 1; n <= degree_; ++n)
    for (int b = 1; b <= n; ++b) {
      const int a = n - b;
      d.coeff(a, b - 1) = b * coeff(a, b) / frame_.scale;
    }
  return d;
}

Poly2 Poly2::elevated(int degree) const {
  if (degree < degree_) throw InvalidArgument("Poly2: cannot lower degree by elevation");
  Poly2 p(degree, frame_);
  std::copy(coeffs_.begin(), coeffs_.end(), p.coeffs_.begin());
  return p;
}

void Poly2::require_same_frame(const Poly2& o) const {
  if (!(frame_ == o.frame_)) throw InvalidArgument("Poly2: operands live in different frames");
}

Poly2& Poly2::operator+=(const Poly2& o) {
  require_same_frame(o);
  if (o.degree_ > degree_) *this = elevated(o.degree_);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
  require_same_frame(o);
  if (o.degree_ > degree_) *this = elevated(o.degree_);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

Poly2& Poly2::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  a.require_same_frame(b);
  Poly2 p(a.degree_ + b.degree_, a.frame_);
  for (int na = 0; na <= a.degree_; ++na)
    for (int ba = 0; ba <= na; ++ba) {
      const double ca = a.coeff(na - ba, ba);
      if (ca == 0.0) continue;
      for (int nb = 0; nb <= b.degree_; ++nb)
        for (int bb = 0; bb <= nb; ++bb) p.coeff(na - ba + nb - bb, ba + bb) += ca * b.coeff(nb - bb, bb);
    }
  return p;
}

}  // namespace awstokes
