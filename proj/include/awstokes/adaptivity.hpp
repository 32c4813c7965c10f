#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "awstokes/eigensolver.hpp"
#include "awstokes/estimators.hpp"
#include "awstokes/fields.hpp"
#include "awstokes/mesh.hpp"
#include "awstokes/postprocess.hpp"

namespace awstokes {

enum class RefinementMode { Uniform, Adaptive };
RefinementMode parse_mode(std::string_view tag);
std::string_view mode_name(RefinementMode m);
EstimatorKind parse_estimator(std::string_view tag);
std::string_view estimator_name(EstimatorKind k);

/// Smallest set of elements, taken in descending indicator order (ties by
/// index), whose indicators sum to at least theta times the total.
std::set<int> mark_doerfler(std::span<const double> indicators, double theta);

/// Number of stress plus velocity unknowns on a mesh.
long count_dofs(const Mesh& mesh);

/// Everything computed on one mesh.
struct LevelResult {
  Mesh mesh;
  long ndof = 0;
  EigenSolution eig;
  PiecewiseStress sigma;
  PiecewiseVector uh;
  PostField post;
  double lambda_star = 0.0;
  PiecewiseVector utilde;
  double lambda_tilde = 0.0;
  EstimatorReport eta;
  EstimatorReport mu;
};

/// Solves for the eig_index-th eigenpair (1-based) and evaluates all derived quantities.
LevelResult solve_level(const Mesh& mesh, int eig_index, double nu = 1.0, const EigenOptions& options = {});

struct AdaptiveConfig {
  Domain domain = Domain::Square;
  RefinementMode mode = RefinementMode::Adaptive;
  double theta = 0.5;
  int eig_index = 1;
  int max_levels = 8;  ///< number of solved levels; 0 means unbounded (max_ndof must be set)
  long max_ndof = 0;   ///< stop before solving a mesh with more unknowns; 0 means unbounded
  EstimatorKind marking = EstimatorKind::Eta;
  double nu = 1.0;
  EigenOptions eigen;
  std::optional<double> lambda_ref;
};

struct ConvergenceRow {
  int level = 0;
  long ndof = 0;
  double lambda_h = 0.0;
  double lambda_star = 0.0;
  double lambda_tilde = 0.0;
  double eta2 = 0.0;
  double mu2 = 0.0;
  double err_h = 0.0;  ///< |lambda_ref - lambda_h|, NaN without a reference value
  double err_star = 0.0;
  double err_tilde = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

struct AdaptiveResult {
  ConvergenceTable table;
  Mesh final_mesh;
  /// Empty on success, otherwise the level and message of the solver failure that ended the loop.
  std::string failure;
};

AdaptiveResult adaptive_loop(const AdaptiveConfig& config,
                             const std::function<void(const LevelResult&)>& observer = {});

}  // namespace awstokes
