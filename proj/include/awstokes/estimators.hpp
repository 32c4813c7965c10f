#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "awstokes/fields.hpp"
#include "awstokes/mesh.hpp"

namespace awstokes {

enum class EstimatorKind { Eta, Mu };

/// Squared estimator contributions split by term.
///
/// nonconformity[t] = ||A sigma - eps(w)||^2_K,
/// volume[t]        = h_K^2 ||lambda w + div sigma||^2_K,
/// jump[e]          = h_E^{-1} ||[w]||^2_E (zero trace outside the domain).
struct EstimatorReport {
  EstimatorKind kind = EstimatorKind::Eta;
  std::vector<double> nonconformity;
  std::vector<double> volume;
  std::vector<double> jump;
  double total = 0.0;

  int level = 0;
  double lambda = std::numeric_limits<double>::quiet_NaN();  ///< eigenvalue used in the volume term

  double sum_nonconformity() const;
  double sum_volume() const;
  double sum_jump() const;
};

/// Residual estimator for the post-processed pair (u*, lambda*).
EstimatorReport eta_squared(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& ustar,
                            double lambda_star, double nu = 1.0);

/// Estimator for the conforming pair; jump terms are identically zero.
EstimatorReport mu_squared(const Mesh& mesh, const PiecewiseStress& sigma, const PiecewiseVector& utilde,
                           double lambda_tilde, double nu = 1.0);

/// Per-element marking indicators: own terms, half of each interior edge jump and full boundary edge jumps.
std::vector<double> element_indicators(const Mesh& mesh, const EstimatorReport& report);

/// total / |lambda_ref - lambda|; +infinity (with a warning on stderr) when the error vanishes.
double efficiency_index(const EstimatorReport& report, double lambda_ref);

/// Rows "element,level,id,nonconformity,volume", "edge,level,id,jump," and "total,level,-1,total,".
void write_estimator_csv(std::ostream& os, const EstimatorReport& report);

}  // namespace awstokes
