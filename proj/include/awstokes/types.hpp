#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace awstokes {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

/// Symmetric 2x2 tensor stored by its three independent components.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const { return xx + yy; }

  Vec2 apply(const Vec2& n) const { return {xx * n.x() + xy * n.y(), xy * n.x() + yy * n.y()}; }

  Sym2& operator+=(const Sym2& o) {
    xx += o.xx;
    xy += o.xy;
    yy += o.yy;
    return *this;
  }
  Sym2& operator-=(const Sym2& o) {
    xx -= o.xx;
    xy -= o.xy;
    yy -= o.yy;
    return *this;
  }
  Sym2& operator*=(double s) {
    xx *= s;
    xy *= s;
    yy *= s;
    return *this;
  }
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend Sym2 operator*(double s, Sym2 a) { return a *= s; }

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
};

/// Frobenius product tau : sigma.
inline double contract(const Sym2& a, const Sym2& b) { return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy; }

inline double frobenius_norm(const Sym2& a) { return std::sqrt(contract(a, a)); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry or ill-conditioned element construction.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, non-convergence or a singular discrete system.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace awstokes
