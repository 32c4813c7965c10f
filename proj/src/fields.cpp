#include "awstokes/fields.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>

#include <Eigen/Dense>

namespace awstokes {

namespace {

constexpr int kMaxMonomials = 45;  // degree 8

struct Table {
  std::array<double, kMaxMonomials> v{}, dx{}, dy{};
};

Table table_at(const Frame& f, int degree, const Point& x) {
  Table t;
  evaluate_monomials(f, degree, x, t.v, t.dx, t.dy);
  return t;
}

}  // namespace

StressPiece StressPiece::from_polys(const Poly2& xx, const Poly2& xy, const Poly2& yy) {
  if (!(xx.frame() == xy.frame()) || !(xx.frame() == yy.frame()))
    throw InvalidArgument("StressPiece: components must share a frame");
  StressPiece s;
  s.frame = xx.frame();
  const std::array<const Poly2*, 3> comps{&xx, &xy, &yy};
  for (int c = 0; c < 3; ++c) {
    const Poly2& p = *comps[static_cast<std::size_t>(c)];
    if (p.degree() > 3) throw InvalidArgument("StressPiece: degree above 3");
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) s.coef(static_cast<int>(k), c) = p.coeffs()[k];
  }
  return s;
}

Sym2 StressPiece::value(const Point& x) const {
  std::array<double, 10> m{};
  evaluate_monomials(3, frame.local(x), m);
  const Eigen::Map<const Eigen::Matrix<double, 1, 10>> mv(m.data());
  const Eigen::RowVector3d v = mv * coef;
  return {v(0), v(1), v(2)};
}

Vec2 StressPiece::divergence(const Point& x) const {
  const Table t = table_at(frame, 3, x);
  const Eigen::Map<const Eigen::Matrix<double, 1, 10>> dx(t.dx.data()), dy(t.dy.data());
  const Eigen::RowVector3d gx = dx * coef;
  const Eigen::RowVector3d gy = dy * coef;
  return {gx(0) + gy(1), gx(1) + gy(2)};
}

VectorPiece VectorPiece::from_polys(const Poly2& x, const Poly2& y) {
  if (!(x.frame() == y.frame())) throw InvalidArgument("VectorPiece: components must share a frame");
  const int deg = std::max(x.degree(), y.degree());
  VectorPiece v(x.frame(), deg);
  for (std::size_t k = 0; k < x.coeffs().size(); ++k) v.coef(static_cast<int>(k), 0) = x.coeffs()[k];
  for (std::size_t k = 0; k < y.coeffs().size(); ++k) v.coef(static_cast<int>(k), 1) = y.coeffs()[k];
  return v;
}

Vec2 VectorPiece::value(const Point& x) const {
  std::array<double, kMaxMonomials> m{};
  evaluate_monomials(degree, frame.local(x), m);
  const Eigen::Map<const Eigen::RowVectorXd> mv(m.data(), coef.rows());
  return (mv * coef).transpose();
}

Sym2 VectorPiece::strain(const Point& x) const {
  const Table t = table_at(frame, degree, x);
  const Eigen::Map<const Eigen::RowVectorXd> dx(t.dx.data(), coef.rows()), dy(t.dy.data(), coef.rows());
  const Eigen::RowVector2d gx = dx * coef;  // (du_x/dx, du_y/dx)
  const Eigen::RowVector2d gy = dy * coef;  // (du_x/dy, du_y/dy)
  return {gx(0), 0.5 * (gy(0) + gx(1)), gy(1)};
}

PiecewiseStress stress_field(const GlobalSystem& system, const Eigen::VectorXd& sigma) {
  if (sigma.size() < system.dofs.n_sigma) throw InvalidArgument("stress_field: coefficient vector too short");
  PiecewiseStress out;
  out.reserve(system.bases.size());
  for (std::size_t t = 0; t < system.bases.size(); ++t) {
    const AWBasis& b = system.bases[t];
    Eigen::Matrix<double, AWBasis::kDofs, 1> local;
    for (int j = 0; j < AWBasis::kDofs; ++j) local(j) = sigma(system.dofs.sigma[t][static_cast<std::size_t>(j)]);
    const Eigen::Matrix<double, AWBasis::kCoefficients, 1> c = b.coef * local;
    StressPiece s;
    s.frame = b.frame;
    for (int comp = 0; comp < 3; ++comp) s.coef.col(comp) = c.segment<10>(10 * comp);
    out.push_back(s);
  }
  return out;
}

VectorPiece p1_piece(const TriangleGeom& k, const Eigen::Matrix<double, 6, 1>& local) {
  VectorPiece v(k.frame(), 1);
  Eigen::Matrix3d vander;
  for (int i = 0; i < 3; ++i) {
    const Point xi = v.frame.local(k.p[static_cast<std::size_t>(i)]);
    vander.row(i) << 1.0, xi.x(), xi.y();
  }
  // Column a of the inverse holds the monomial coefficients of lambda_a.
  const Eigen::Matrix3d bary = vander.inverse();
  for (int c = 0; c < 2; ++c) v.coef.col(c) = bary * local.segment<3>(3 * c);
  return v;
}

PiecewiseVector velocity_field(const Mesh& mesh, const Eigen::VectorXd& u) {
  if (u.size() != 6 * mesh.num_triangles()) throw InvalidArgument("velocity_field: size mismatch");
  PiecewiseVector out;
  out.reserve(static_cast<std::size_t>(mesh.num_triangles()));
  for (int t = 0; t < mesh.num_triangles(); ++t) out.push_back(p1_piece(mesh.geometry(t), u.segment<6>(6 * t)));
  return out;
}

double l2_inner(const Mesh& mesh, const PiecewiseVector& v, const PiecewiseVector& w) {
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& vt = v[static_cast<std::size_t>(t)];
    const auto& wt = w[static_cast<std::size_t>(t)];
    sum += integrate_fn(mesh.geometry(t), [&](const Point& x) { return vt.value(x).dot(wt.value(x)); });
  }
  return sum;
}

double div_inner(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& w) {
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& st = sigma[static_cast<std::size_t>(t)];
    const auto& wt = w[static_cast<std::size_t>(t)];
    sum += integrate_fn(mesh.geometry(t), [&](const Point& x) { return st.divergence(x).dot(wt.value(x)); });
  }
  return sum;
}

void write_field_table(std::ostream& os, const PiecewiseVector& field) {
  char buf[64];
  for (std::size_t t = 0; t < field.size(); ++t) {
    const VectorPiece& p = field[t];
    os << t << ' ' << p.degree;
    for (double v : {p.frame.center.x(), p.frame.center.y(), p.frame.scale}) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      os << buf;
    }
    for (int c = 0; c < 2; ++c)
      for (Eigen::Index k = 0; k < p.coef.rows(); ++k) {
        std::snprintf(buf, sizeof buf, " %.17g", p.coef(k, c));
        os << buf;
      }
    os << '\n';
  }
}

}  // namespace awstokes
