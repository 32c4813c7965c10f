#include "awstokes/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "awstokes/aw_element.hpp"
#include "awstokes/quadrature.hpp"

namespace awstokes {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

EstimatorReport volume_terms(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& w,
                             double lambda, double nu, EstimatorKind kind) {
  const auto nt = static_cast<std::size_t>(mesh.num_triangles());
  if (sigma.size() != nt || w.size() != nt) throw InvalidArgument("estimator: field size mismatch");
  EstimatorReport r;
  r.kind = kind;
  r.lambda = lambda;
  r.level = mesh.level;
  r.nonconformity.resize(nt);
  r.volume.resize(nt);
  r.jump.assign(static_cast<std::size_t>(mesh.num_edges()), 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    const TriangleGeom k = mesh.geometry(static_cast<int>(t));
    const StressPiece& s = sigma[t];
    const VectorPiece& wt = w[t];
    r.nonconformity[t] = integrate_fn(k, [&](const Point& x) {
      const Sym2 d = deviator(s.value(x), nu) - wt.strain(x);
      return contract(d, d);
    });
    const double h = k.diameter();
    r.volume[t] = h * h * integrate_fn(k, [&](const Point& x) {
      return (lambda * wt.value(x) + s.divergence(x)).squaredNorm();
    });
  }
  return r;
}

void finish(EstimatorReport& r) { r.total = r.sum_nonconformity() + r.sum_volume() + r.sum_jump(); }

}  // namespace

double EstimatorReport::sum_nonconformity() const { return sum(nonconformity); }
double EstimatorReport::sum_volume() const { return sum(volume); }
double EstimatorReport::sum_jump() const { return sum(jump); }

EstimatorReport eta_squared(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& ustar,
                            double lambda_star, double nu) {
  EstimatorReport r = volume_terms(mesh, sigma, ustar, lambda_star, nu, EstimatorKind::Eta);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<std::size_t>(e)];
    const Point& a = mesh.vertices[static_cast<std::size_t>(edge.v[0])];
    const Point& b = mesh.vertices[static_cast<std::size_t>(edge.v[1])];
    const VectorPiece& left = ustar[static_cast<std::size_t>(edge.adj[0])];
    const VectorPiece* right = edge.adj[1] >= 0 ? &ustar[static_cast<std::size_t>(edge.adj[1])] : nullptr;
    const double j2 = edge_integrate_fn(a, b, [&](const Point& x, double) {
      Vec2 d = left.value(x);
      if (right) d -= right->value(x);
      return d.squaredNorm();
    });
    r.jump[static_cast<std::size_t>(e)] = j2 / edge.length;
  }
  finish(r);
  return r;
}

EstimatorReport mu_squared(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& utilde,
                           double lambda_tilde, double nu) {
  EstimatorReport r = volume_terms(mesh, sigma, utilde, lambda_tilde, nu, EstimatorKind::Mu);
  finish(r);
  return r;
}

std::vector<double> element_indicators(const Mesh& mesh, const EstimatorReport& report) {
  std::vector<double> out(report.nonconformity.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = report.nonconformity[t] + report.volume[t];
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<std::size_t>(e)];
    const double j = report.jump[static_cast<std::size_t>(e)];
    if (edge.adj[1] < 0) {
      out[static_cast<std::size_t>(edge.adj[0])] += j;
    } else {
      out[static_cast<std::size_t>(edge.adj[0])] += 0.5 * j;
      out[static_cast<std::size_t>(edge.adj[1])] += 0.5 * j;
    }
  }
  return out;
}

double efficiency_index(const EstimatorReport& report, double lambda_ref) {
  const double err = std::abs(lambda_ref - report.lambda);
  if (err == 0.0) {
    std::fprintf(stderr, "warning: efficiency_index: eigenvalue error is zero\n");
    return std::numeric_limits<double>::infinity();
  }
  return report.total / err;
}

void write_estimator_csv(std::ostream& os, const EstimatorReport& report) {
  char buf[160];
  os << "type,level,id,term1,term2\n";
  for (std::size_t t = 0; t < report.nonconformity.size(); ++t) {
    std::snprintf(buf, sizeof buf, "element,%d,%zu,%.17g,%.17g\n", report.level, t, report.nonconformity[t],
                  report.volume[t]);
    os << buf;
  }
  for (std::size_t e = 0; e < report.jump.size(); ++e) {
    std::snprintf(buf, sizeof buf, "edge,%d,%zu,%.17g,\n", report.level, e, report.jump[e]);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "total,%d,-1,%.17g,\n", report.level, report.total);
  os << buf;
}

}  // namespace awstokes
