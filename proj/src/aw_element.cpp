#include "awstokes/aw_element.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "awstokes/mesh.hpp"

namespace awstokes {

namespace {

using Coefficients = Eigen::Matrix<double, AWBasis::kCoefficients, 1>;
constexpr int kM = AWBasis::kMonomials;

struct MonomialTable {
  std::array<double, kM> v{}, dx{}, dy{};
};

MonomialTable monomials_at(const Frame& f, const Point& x) {
  MonomialTable t;
  evaluate_monomials(f, 3, x, t.v, t.dx, t.dy);
  return t;
}

/// 6x30 matrix of the quadratic coefficients of div tau (cubic coefficients only contribute).
Eigen::Matrix<double, 6, AWBasis::kCoefficients> divergence_constraints() {
  Eigen::Matrix<double, 6, AWBasis::kCoefficients> c = Eigen::Matrix<double, 6, AWBasis::kCoefficients>::Zero();
  const std::array<std::array<int, 2>, 3> quad{{{2, 0}, {1, 1}, {0, 2}}};
  for (int q = 0; q < 3; ++q) {
    const int qa = quad[static_cast<std::size_t>(q)][0];
    const int qb = quad[static_cast<std::size_t>(q)][1];
    // d/dx of xi^(qa+1) eta^qb and d/dy of xi^qa eta^(qb+1) land on xi^qa eta^qb.
    const int from_x = monomial_index(qa + 1, qb);
    const int from_y = monomial_index(qa, qb + 1);
    // first component: d/dx tau_xx + d/dy tau_xy
    c(q, 0 * kM + from_x) += qa + 1;
    c(q, 1 * kM + from_y) += qb + 1;
    // second component: d/dx tau_xy + d/dy tau_yy
    c(3 + q, 1 * kM + from_x) += qa + 1;
    c(3 + q, 2 * kM + from_y) += qb + 1;
  }
  return c;
}

}  // namespace

Sym2 deviator(const Sym2& tau) { return deviator(tau, 1.0); }

Sym2 deviator(const Sym2& tau, double nu) {
  const double half_trace = 0.5 * tau.trace();
  const double s = 0.5 / nu;
  return {s * (tau.xx - half_trace), s * tau.xy, s * (tau.yy - half_trace)};
}

EdgeFrame local_edge(const TriangleGeom& k, const std::array<bool, 3>& reversed, int i) {
  Point a = k.p[static_cast<std::size_t>((i + 1) % 3)];
  Point b = k.p[static_cast<std::size_t>((i + 2) % 3)];
  if (reversed[static_cast<std::size_t>(i)]) std::swap(a, b);
  const Vec2 d = b - a;
  const double len = d.norm();
  return {a, b, Vec2(d.y(), -d.x()) / len, len};
}

Sym2 AWBasis::value(int j, const Point& x) const {
  std::array<double, kM> m{};
  evaluate_monomials(3, frame.local(x), m);
  const Eigen::Map<const Eigen::Matrix<double, kM, 1>> mv(m.data());
  return {mv.dot(coef.col(j).segment<kM>(0)), mv.dot(coef.col(j).segment<kM>(kM)),
          mv.dot(coef.col(j).segment<kM>(2 * kM))};
}

Vec2 AWBasis::divergence(int j, const Point& x) const {
  const MonomialTable t = monomials_at(frame, x);
  const Eigen::Map<const Eigen::Matrix<double, kM, 1>> dx(t.dx.data()), dy(t.dy.data());
  const auto c = coef.col(j);
  return {dx.dot(c.segment<kM>(0)) + dy.dot(c.segment<kM>(kM)), dx.dot(c.segment<kM>(kM)) + dy.dot(c.segment<kM>(2 * kM))};
}

std::array<Poly2, 3> AWBasis::shape(int j) const {
  std::array<Poly2, 3> out;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> v(kM);
    for (int k = 0; k < kM; ++k) v[static_cast<std::size_t>(k)] = coef(c * kM + k, j);
    out[static_cast<std::size_t>(c)] = Poly2(3, frame, std::move(v));
  }
  return out;
}

ConstraintRank divergence_constraint_rank() {
  const Eigen::MatrixXd c = divergence_constraints();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-12 * s(0)) ++rank;
  return {rank, AWBasis::kCoefficients - rank};
}

AWBasis build_aw_basis(const TriangleGeom& k, const std::array<bool, 3>& reversed, int triangle) {
  if (k.signed_area() <= 0.0) throw GeometryError("build_aw_basis: triangle is degenerate or clockwise");
  AWBasis basis;
  basis.triangle = triangle;
  basis.geom = k;
  basis.reversed = reversed;
  basis.frame = k.frame();

  // Null space of the divergence constraint: P3(K;S) fields with div in P1.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(divergence_constraints()), Eigen::ComputeFullV);
  const Eigen::MatrixXd z = svd.matrixV().rightCols(AWBasis::kDofs);

  // DOF functionals applied to the 30 monomial-component fields.
  Eigen::Matrix<double, AWBasis::kDofs, AWBasis::kCoefficients> l =
      Eigen::Matrix<double, AWBasis::kDofs, AWBasis::kCoefficients>::Zero();
  for (int i = 0; i < 3; ++i) {
    std::array<double, kM> m{};
    evaluate_monomials(3, basis.frame.local(k.p[static_cast<std::size_t>(i)]), m);
    for (int c = 0; c < 3; ++c)
      for (int q = 0; q < kM; ++q) l(3 * i + c, c * kM + q) = m[static_cast<std::size_t>(q)];
  }
  const GaussRule& g = default_edge_rule();
  for (int i = 0; i < 3; ++i) {
    const EdgeFrame e = local_edge(k, reversed, i);
    const double nx = e.normal.x(), ny = e.normal.y();
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double t = g.nodes[q];
      const double w = 0.5 * g.weights[q];
      std::array<double, kM> m{};
      evaluate_monomials(3, basis.frame.local(Point(0.5 * (1.0 - t) * e.a + 0.5 * (1.0 + t) * e.b)), m);
      for (int p = 0; p < 2; ++p) {
        const double wp = p == 0 ? w : w * t;
        const int rx = 9 + 4 * i + 2 * p;  // (tau n)_x = xx nx + xy ny
        const int ry = rx + 1;             // (tau n)_y = xy nx + yy ny
        for (int s = 0; s < kM; ++s) {
          const double v = wp * m[static_cast<std::size_t>(s)];
          l(rx, 0 * kM + s) += v * nx;
          l(rx, 1 * kM + s) += v * ny;
          l(ry, 1 * kM + s) += v * nx;
          l(ry, 2 * kM + s) += v * ny;
        }
      }
    }
  }
  const QuadRule& rule = default_rule();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    std::array<double, kM> m{};
    evaluate_monomials(3, basis.frame.local(k.from_barycentric(rule.points[q])), m);
    for (int c = 0; c < 3; ++c)
      for (int s = 0; s < kM; ++s) l(21 + c, c * kM + s) += rule.weights[q] * m[static_cast<std::size_t>(s)];
  }

  const Eigen::MatrixXd d = l * z;
  Eigen::JacobiSVD<Eigen::MatrixXd> dsvd(d);
  const auto& sv = dsvd.singularValues();
  basis.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!std::isfinite(basis.condition) || basis.condition > 1e10)
    throw GeometryError("build_aw_basis: DOF matrix ill-conditioned (condition " + std::to_string(basis.condition) +
                        ") on triangle " + std::to_string(triangle));
  basis.coef = z * d.partialPivLu().inverse();
  return basis;
}

AWBasis build_aw_basis(const Mesh& mesh, int t) { return build_aw_basis(mesh.geometry(t), mesh.edge_orientation(t), t); }

LocalMatrices local_matrices(const AWBasis& basis, double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("local_matrices: viscosity must be positive");
  LocalMatrices out;
  out.A.setZero();
  out.B.setZero();
  out.M.setZero();
  out.C.setZero();
  const QuadRule& rule = default_rule();
  const double area = basis.geom.area();
  Eigen::Matrix<double, 3, AWBasis::kDofs> val;  // xx, xy, yy
  Eigen::Matrix<double, 3, AWBasis::kDofs> dev;
  Eigen::Matrix<double, 2, AWBasis::kDofs> div;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& bary = rule.points[q];
    const double w = rule.weights[q] * area;
    const MonomialTable t = monomials_at(basis.frame, basis.geom.from_barycentric(bary));
    const Eigen::Map<const Eigen::Matrix<double, 1, kM>> v(t.v.data()), dx(t.dx.data()), dy(t.dy.data());
    for (int c = 0; c < 3; ++c) val.row(c) = v * basis.coef.middleRows<kM>(c * kM);
    const Eigen::Matrix<double, 1, AWBasis::kDofs> dxx = dx * basis.coef.middleRows<kM>(0);
    const Eigen::Matrix<double, 1, AWBasis::kDofs> dxy = dx * basis.coef.middleRows<kM>(kM);
    const Eigen::Matrix<double, 1, AWBasis::kDofs> dyxy = dy * basis.coef.middleRows<kM>(kM);
    const Eigen::Matrix<double, 1, AWBasis::kDofs> dyy = dy * basis.coef.middleRows<kM>(2 * kM);
    div.row(0) = dxx + dyxy;
    div.row(1) = dxy + dyy;
    const double s = 0.5 / nu;
    const Eigen::Matrix<double, 1, AWBasis::kDofs> half_trace = 0.5 * (val.row(0) + val.row(2));
    dev.row(0) = s * (val.row(0) - half_trace);
    dev.row(1) = s * val.row(1);
    dev.row(2) = s * (val.row(2) - half_trace);
    // tau : sigma with the off-diagonal counted twice
    out.A.noalias() += w * (dev.row(0).transpose() * val.row(0) + 2.0 * dev.row(1).transpose() * val.row(1) +
                            dev.row(2).transpose() * val.row(2));
    out.C += w * (val.row(0) + val.row(2)).transpose();
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 3; ++a) {
        const double la = bary[static_cast<std::size_t>(a)];
        out.B.row(3 * c + a) += w * la * div.row(c);
        for (int b = 0; b < 3; ++b) out.M(3 * c + a, 3 * c + b) += w * la * bary[static_cast<std::size_t>(b)];
      }
  }
  out.A = 0.5 * (out.A + out.A.transpose()).eval();
  return out;
}

}  // namespace awstokes
