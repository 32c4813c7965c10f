#include "awstokes/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace awstokes {

RefinementMode parse_mode(std::string_view tag) {
  if (tag == "uniform") return RefinementMode::Uniform;
  if (tag == "adaptive") return RefinementMode::Adaptive;
  throw InvalidArgument("unknown refinement mode '" + std::string(tag) + "'");
}

std::string_view mode_name(RefinementMode m) { return m == RefinementMode::Uniform ? "uniform" : "adaptive"; }

EstimatorKind parse_estimator(std::string_view tag) {
  if (tag == "eta") return EstimatorKind::Eta;
  if (tag == "mu") return EstimatorKind::Mu;
  throw InvalidArgument("unknown estimator '" + std::string(tag) + "'");
}

std::string_view estimator_name(EstimatorKind k) { return k == EstimatorKind::Eta ? "eta" : "mu"; }

std::set<int> mark_doerfler(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("mark_doerfler: theta must lie in (0, 1]");
  for (double v : indicators)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("mark_doerfler: indicators must be finite and >= 0");
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return indicators[static_cast<std::size_t>(a)] > indicators[static_cast<std::size_t>(b)];
  });
  std::set<int> marked;
  if (theta == 1.0) {
    for (int i : order)
      if (indicators[static_cast<std::size_t>(i)] > 0.0) marked.insert(i);
    return marked;
  }
  double total = 0.0;
  for (int i : order) total += indicators[static_cast<std::size_t>(i)];
  if (total == 0.0) return marked;
  // Relative slack absorbs rounding in the prefix sums, so equal indicators mark exactly ceil(theta T).
  const double target = theta * total * (1.0 - 1e-12);
  double acc = 0.0;
  for (int i : order) {
    if (acc >= target) break;
    acc += indicators[static_cast<std::size_t>(i)];
    marked.insert(i);
  }
  return marked;
}

long count_dofs(const Mesh& mesh) {
  return 3L * mesh.num_vertices() + 4L * mesh.num_edges() + 9L * mesh.num_triangles();
}

LevelResult solve_level(const Mesh& mesh, int eig_index, double nu, const EigenOptions& options) {
  if (eig_index < 1) throw InvalidArgument("solve_level: eigenvalue index must be >= 1");
  LevelResult r;
  r.mesh = mesh;
  GlobalSystem system = assemble(mesh, nu);
  r.ndof = system.dofs.total();
  const ConstrainedSystem cs = constrain(std::move(system));
  std::vector<EigenSolution> eig = solve_eigen(cs, eig_index, options);
  if (static_cast<int>(eig.size()) < eig_index) throw SolverError("solve_level: requested eigenvalue not found");
  r.eig = std::move(eig[static_cast<std::size_t>(eig_index - 1)]);
  r.sigma = stress_field(cs.system, r.eig.sigma);
  r.uh = velocity_field(mesh, r.eig.u);
  r.post = postprocess(mesh, r.sigma, r.uh, nu);
  r.lambda_star = rayleigh_quotient(mesh, r.sigma, r.post.u);
  r.utilde = conforming_average(mesh, r.post.u).to_piecewise(mesh);
  r.lambda_tilde = rayleigh_quotient(mesh, r.sigma, r.utilde);
  r.eta = eta_squared(mesh, r.sigma, r.post.u, r.lambda_star, nu);
  r.mu = mu_squared(mesh, r.sigma, r.utilde, r.lambda_tilde, nu);
  return r;
}

AdaptiveResult adaptive_loop(const AdaptiveConfig& config, const std::function<void(const LevelResult&)>& observer) {
  if (config.max_levels <= 0 && config.max_ndof <= 0)
    throw InvalidArgument("adaptive_loop: a level or unknown budget is required");
  if (config.max_levels < 0 || config.max_ndof < 0) throw InvalidArgument("adaptive_loop: negative budget");
  if (!(config.theta > 0.0 && config.theta <= 1.0)) throw InvalidArgument("adaptive_loop: theta must lie in (0, 1]");
  if (!(config.nu > 0.0)) throw InvalidArgument("adaptive_loop: nu must be positive");

  AdaptiveResult result;
  Mesh mesh = build_initial_mesh(config.domain);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto error = [&](double v) { return config.lambda_ref ? std::abs(*config.lambda_ref - v) : nan; };

  for (int level = 0;; ++level) {
    LevelResult r;
    try {
      r = solve_level(mesh, config.eig_index, config.nu, config.eigen);
    } catch (const SolverError& e) {
      result.failure = "level " + std::to_string(level) + ": " + e.what();
      result.final_mesh = std::move(mesh);
      return result;
    }
    ConvergenceRow row;
    row.level = level;
    row.ndof = r.ndof;
    row.lambda_h = r.eig.lambda;
    row.lambda_star = r.lambda_star;
    row.lambda_tilde = r.lambda_tilde;
    row.eta2 = r.eta.total;
    row.mu2 = r.mu.total;
    row.err_h = error(row.lambda_h);
    row.err_star = error(row.lambda_star);
    row.err_tilde = error(row.lambda_tilde);
    result.table.rows.push_back(row);
    if (observer) observer(r);

    if (config.max_levels > 0 && level + 1 >= config.max_levels) break;
    Mesh next;
    if (config.mode == RefinementMode::Uniform) {
      next = refine_uniform(mesh);
    } else {
      const EstimatorReport& rep = config.marking == EstimatorKind::Eta ? r.eta : r.mu;
      const std::vector<double> ind = element_indicators(mesh, rep);
      next = refine(mesh, mark_doerfler(ind, config.theta));
    }
    if (config.max_ndof > 0 && count_dofs(next) > config.max_ndof) break;
    mesh = std::move(next);
  }
  result.final_mesh = std::move(mesh);
  return result;
}

}  // namespace awstokes
