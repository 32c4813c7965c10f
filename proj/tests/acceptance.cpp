// Acceptance suite: runs every primary criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is nonzero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "awstokes/aw_element.hpp"
#include "awstokes/experiments.hpp"
#include "test_support.hpp"

using namespace awstokes;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s  (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

/// Worst values of the discrete identities over every level of every run.
struct IdentityTracker {
  double div = 0.0;         // max |div sigma_h + lambda_h u_h| / lambda_h
  double energy = 0.0;      // max |2 nu ||A sigma_h||^2 - lambda_h| / lambda_h
  double projection = 0.0;  // max |P_K u* - u_h| / max |u_h|
  int meshes = 0;
  int div_over = 0;       // meshes above the div tolerance
  std::string div_where;  // run, level and roundoff scale of the worst div discrepancy

  void check(const LevelResult& r, double nu, const std::string& run) {
    ++meshes;
    const Mesh& m = r.mesh;
    const double lambda = r.eig.lambda;
    double energy_sum = 0.0, umax = 0.0, proj = 0.0, mesh_div = 0.0, floor = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) {
      const TriangleGeom k = m.geometry(t);
      const StressPiece& s = r.sigma[static_cast<std::size_t>(t)];
      const VectorPiece& uh = r.uh[static_cast<std::size_t>(t)];
      const VectorPiece& us = r.post.u[static_cast<std::size_t>(t)];
      Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
      Eigen::Matrix<double, 3, 2> rhs = Eigen::Matrix<double, 3, 2>::Zero();
      const QuadRule& rule = default_rule();
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.points[q];
        const Point x = k.from_barycentric(l);
        const double w = rule.weights[q] * k.area();
        const double d = (s.divergence(x) + lambda * uh.value(x)).norm() / lambda;
        if (d > mesh_div) {
          mesh_div = d;
          const Sym2 v = s.value(x);
          // size of one rounding error in sigma, differentiated on this element
          const double h = std::sqrt(2.0 * k.area());
          floor = std::numeric_limits<double>::epsilon() * (std::abs(v.xx) + std::abs(v.xy) + std::abs(v.yy)) / (h * lambda);
        }
        const Sym2 a = deviator(s.value(x), nu);
        energy_sum += w * contract(a, a);
        const Eigen::Vector3d lv(l[0], l[1], l[2]);
        mass += w * lv * lv.transpose();
        rhs += w * lv * (us.value(x) - uh.value(x)).transpose();
      }
      for (const Point& p : k.p) umax = std::max(umax, uh.value(p).norm());
      proj = std::max(proj, mass.ldlt().solve(rhs).cwiseAbs().maxCoeff());
    }
    if (mesh_div >= 1e-8) ++div_over;
    if (mesh_div > div) {
      div = mesh_div;
      div_where = run + " level " + std::to_string(m.level) + ", N " + std::to_string(r.ndof) +
                  fmt(", eps |sigma| / (h lambda) there %.1e", floor);
    }
    energy = std::max(energy, std::abs(2 * nu * energy_sum - lambda) / lambda);
    projection = std::max(projection, proj / umax);
  }
};

struct Run {
  BenchmarkResult result;
  double seconds = 0.0;
};

Run run(Domain d, RefinementMode mode, int levels, long max_ndof, IdentityTracker& ids) {
  BenchmarkOptions o;
  o.config.domain = d;
  o.config.mode = mode;
  o.config.max_levels = levels;
  o.config.max_ndof = max_ndof;
  o.config.lambda_ref = reference_eigenvalue(d);
  o.out_dir = "acceptance_output";
  o.on_level = [&](const LevelResult& r) {
    ids.check(r, o.config.nu, std::string(domain_name(d)) + " " + std::string(mode_name(mode)));
    std::printf("  [%s %s] level %d  N %ld  lambda_h %.10f  lambda* %.10f\n", std::string(domain_name(d)).c_str(),
                std::string(mode_name(mode)).c_str(), r.mesh.level, r.ndof, r.eig.lambda, r.lambda_star);
    std::fflush(stdout);
  };
  const auto t0 = std::chrono::steady_clock::now();
  Run out{run_benchmark(o), 0.0};
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.result.run.failure.empty()) report(false, "solver run", out.result.run.failure);
  return out;
}

RateFit slope(const ConvergenceTable& t, double ConvergenceRow::*field) {
  std::vector<long> n;
  std::vector<double> e;
  for (const auto& r : t.rows) {
    n.push_back(r.ndof);
    e.push_back(r.*field);
  }
  return fit_rate(n, e, 3);
}

/// Uniform error log-log interpolated at N (no extrapolation; NaN outside the range).
double interpolate(const ConvergenceTable& t, double ConvergenceRow::*field, long n) {
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& a = t.rows[i - 1];
    const auto& b = t.rows[i];
    if (n >= a.ndof && n <= b.ndof) {
      const double s = std::log(static_cast<double>(n) / a.ndof) / std::log(static_cast<double>(b.ndof) / a.ndof);
      return std::exp((1 - s) * std::log(a.*field) + s * std::log(b.*field));
    }
  }
  return std::nan("");
}

void square_uniform(IdentityTracker& ids) {
  const Run r = run(Domain::Square, RefinementMode::Uniform, 6, 0, ids);
  const ConvergenceTable& t = r.result.run.table;
  const auto& last = t.rows.back();
  report(t.rows.size() >= 5 && last.ndof >= 50000, "square uniform: >= 5 levels, final N >= 5e4",
         fmt("levels %.0f, final N %.0f", static_cast<double>(t.rows.size()), static_cast<double>(last.ndof)));
  report(r.seconds < 600.0, "square uniform: runtime < 10 min", fmt("%.1f s", r.seconds));
  const RateFit h = slope(t, &ConvergenceRow::err_h);
  report(within(h.slope, -2.0, 0.3), "square uniform: lambda_h error slope -2.0 +- 0.3", fmt("slope %.4f", h.slope));
  const RateFit s = slope(t, &ConvergenceRow::err_star);
  report(within(s.slope, -3.0, 0.4), "square uniform: lambda* error slope -3.0 +- 0.4", fmt("slope %.4f", s.slope));
  const RateFit w = slope(t, &ConvergenceRow::err_tilde);
  report(within(w.slope, -3.0, 0.4), "square uniform: lambda~ error slope -3.0 +- 0.4", fmt("slope %.4f", w.slope));
  report(last.err_star < 1e-2 * last.err_h, "square uniform: |lambda* - ref| < 1e-2 |lambda_h - ref| at finest level",
         fmt("%.3e vs %.3e", last.err_star, last.err_h));
}

void lshape(IdentityTracker& ids) {
  const Run u = run(Domain::LShape, RefinementMode::Uniform, 6, 0, ids);
  const ConvergenceTable& tu = u.result.run.table;
  const RateFit h = slope(tu, &ConvergenceRow::err_h);
  report(within(h.slope, -0.544, 0.15), "lshape uniform: lambda_h error slope -0.544 +- 0.15", fmt("slope %.4f", h.slope));
  const RateFit e = slope(tu, &ConvergenceRow::eta2);
  report(within(e.slope, -0.544, 0.15), "lshape uniform: eta^2 slope -0.544 +- 0.15", fmt("slope %.4f", e.slope));

  const Run a = run(Domain::LShape, RefinementMode::Adaptive, 0, 150000, ids);
  const ConvergenceTable& ta = a.result.run.table;
  const RateFit s = slope(ta, &ConvergenceRow::err_star);
  report(within(s.slope, -3.0, 0.5), "lshape adaptive: lambda* error slope -3.0 +- 0.5", fmt("slope %.4f", s.slope));
  // Matched N: the largest adaptive N inside the uniform range.
  const ConvergenceRow* match = nullptr;
  for (const auto& row : ta.rows)
    if (row.ndof >= tu.rows.front().ndof && row.ndof <= tu.rows.back().ndof) match = &row;
  if (!match) {
    report(false, "lshape: adaptive error >= 10x below uniform at matched N", "no adaptive level inside the uniform N range");
    return;
  }
  const double uni = interpolate(tu, &ConvergenceRow::err_star, match->ndof);
  report(match->err_star * 10.0 <= uni, "lshape: adaptive lambda* error >= 10x below uniform at matched N",
         fmt("N %.0f: adaptive %.3e, uniform %.3e", static_cast<double>(match->ndof), match->err_star, uni));
}

void slit(IdentityTracker& ids) {
  const Run u = run(Domain::Slit, RefinementMode::Uniform, 6, 0, ids);
  const RateFit h = slope(u.result.run.table, &ConvergenceRow::err_h);
  report(within(h.slope, -0.5, 0.15), "slit uniform: lambda_h error slope -0.5 +- 0.15", fmt("slope %.4f", h.slope));

  const Run a = run(Domain::Slit, RefinementMode::Adaptive, 0, 150000, ids);
  const ConvergenceTable& ta = a.result.run.table;
  const RateFit s = slope(ta, &ConvergenceRow::err_star);
  report(within(s.slope, -3.0, 0.5), "slit adaptive: lambda* error slope -3.0 +- 0.5", fmt("slope %.4f", s.slope));
  bool ok = ta.rows.size() >= 3;
  std::string detail;
  for (std::size_t i = ta.rows.size() >= 3 ? ta.rows.size() - 3 : 0; i < ta.rows.size(); ++i) {
    const double idx = ta.rows[i].eta2 / ta.rows[i].err_star;
    ok = ok && idx >= 0.2 && idx <= 5.0;
    detail += fmt("%.3f ", idx);
  }
  report(ok, "slit adaptive: efficiency eta^2/|lambda_ref - lambda*| in [0.2, 5] on last 3 levels", detail);
}

void oracle() {
  const ConstrainedSystem cs = constrain(assemble(build_initial_mesh(Domain::Square)));
  const Eigen::MatrixXd k(cs.K);
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(cs.size(), cs.size());
  n.bottomRightCorner(cs.n_u(), cs.n_u()) = -Eigen::MatrixXd(cs.system.M);
  const Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(k, n);
  std::vector<double> dense;
  for (Eigen::Index i = 0; i < ges.alphas().size(); ++i) {
    const double b = ges.betas()(i);
    const std::complex<double> a = ges.alphas()(i);
    if (std::abs(b) <= 1e-12 * std::abs(a)) continue;
    const std::complex<double> l = a / b;
    if (std::abs(l.imag()) < 1e-8 * std::abs(l) && l.real() > 0) dense.push_back(l.real());
  }
  std::sort(dense.begin(), dense.end());
  const std::vector<EigenSolution> sparse = solve_eigen(cs, 3);
  double worst = 0.0;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(sparse[static_cast<std::size_t>(i)].lambda - dense[static_cast<std::size_t>(i)]) / dense[static_cast<std::size_t>(i)]);
    detail += fmt("%.10f ", sparse[static_cast<std::size_t>(i)].lambda);
  }
  report(dense.size() >= 3 && worst < 1e-8, "oracle: first 3 eigenvalues match dense QZ on coarsest square to rel 1e-8",
         detail + fmt("max rel diff %.2e", worst));
}

void element_suites() {
  std::mt19937_64 rng(2024);
  double duality = 0.0, divergence = 0.0, quadrature = 0.0;
  for (int i = 0; i < 100; ++i) {
    const TriangleGeom k = testing::random_triangle(rng, std::pow(10.0, -(i % 4)));
    std::bernoulli_distribution flip;
    const AWBasis b = build_aw_basis(k, {flip(rng), flip(rng), flip(rng)});
    for (int j = 0; j < AWBasis::kDofs; ++j) {
      const auto d = apply_dofs(k, b.reversed, [&](const Point& x) { return b.value(j, x); });
      for (int r = 0; r < AWBasis::kDofs; ++r) duality = std::max(duality, std::abs(d(r) - (r == j ? 1.0 : 0.0)));
      const auto s = b.shape(j);
      double size = 0.0;
      for (const Poly2& p : s)
        for (double c : p.coeffs()) size = std::max(size, std::abs(c));
      const Poly2 dx = s[0].dx() + s[1].dy(), dy = s[1].dx() + s[2].dy();
      for (const Poly2* p : {&dx, &dy})
        for (int a = 0; a <= 2; ++a) divergence = std::max(divergence, std::abs(p->coeff(a, 2 - a)) * b.frame.scale / size);
    }
    const TriangleGeom kq = testing::random_triangle(rng);
    for (int a = 0; a <= 8; ++a)
      for (int c = 0; a + c <= 8; ++c) {
        const double exact = testing::exact_integral(kq, {{{a, c}, 1.0}});
        quadrature = std::max(quadrature, std::abs(integrate(kq, Poly2::monomial(a, c)) - exact) / std::max(1.0, std::abs(exact)));
      }
  }
  report(duality < 1e-10, "AW basis duality on 100 random triangles (1e-10)", fmt("max %.2e", duality));
  report(divergence < 1e-10, "AW divergence in P1 on 100 random triangles (1e-10)", fmt("max %.2e", divergence));
  report(quadrature < 1e-12, "quadrature exact to degree 8 on 100 random triangles (1e-12)", fmt("max %.2e", quadrature));
}

}  // namespace

int main() {
  std::filesystem::create_directories("acceptance_output");
  IdentityTracker ids;
  oracle();
  element_suites();
  square_uniform(ids);
  lshape(ids);
  slit(ids);
  const std::string on = fmt("%.0f meshes", ids.meshes);
  report(ids.div < 1e-8, "identity: div sigma_h + lambda_h u_h = 0 to 1e-8 lambda_h on all meshes",
         on + fmt(", max %.2e, %.0f meshes above", ids.div, ids.div_over) + "; worst at " + ids.div_where);
  report(ids.energy < 1e-8, "identity: 2 nu ||A sigma_h||^2 = lambda_h to rel 1e-8 on all meshes",
         on + fmt(", max %.2e", ids.energy));
  report(ids.projection < 1e-10, "identity: P_K u* = u_h to 1e-10 on all meshes", on + fmt(", max %.2e", ids.projection));
  std::printf("%s: %d failed criteria\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", failures);
  return failures == 0 ? 0 : 1;
}
