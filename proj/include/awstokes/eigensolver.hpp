#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "awstokes/assembly.hpp"

namespace awstokes {

struct EigenOptions {
  /// Relative Ritz residual at which a pair is accepted.
  double tol = 1e-10;
  /// Shift s of the operator (K + s N)^{-1} N; must lie below the wanted eigenvalues.
  double shift = 0.0;
  /// Explicit Krylov restarts; 0 selects 10 * m.
  int max_restarts = 0;
  /// Largest Krylov dimension before an explicit restart.
  int max_krylov = 160;
  std::uint64_t seed = 0x5eedULL;
};

/// One discrete eigenpair of the saddle-point pencil.
struct EigenSolution {
  double lambda = 0.0;
  Eigen::VectorXd sigma;  ///< n_sigma stress coefficients followed by the trace multiplier
  Eigen::VectorXd u;      ///< n_u velocity coefficients, unit L2 norm
  double residual_stress = 0.0;    ///< relative residual of the constitutive equation
  double residual_velocity = 0.0;  ///< relative residual of the equilibrium equation
  int iterations = 0;
};

/// LU factorization of K + s N, reused across solves.
class SaddlePointSolver {
 public:
  explicit SaddlePointSolver(const ConstrainedSystem& system, double shift = 0.0);
  ~SaddlePointSolver();
  SaddlePointSolver(SaddlePointSolver&&) noexcept;
  SaddlePointSolver& operator=(SaddlePointSolver&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double shift() const { return shift_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double shift_ = 0.0;
};

/// The m smallest eigenvalues lambda of K x = -lambda N x, ascending.
///
/// Lanczos in the M inner product on the velocity solution operator
/// u -> u-part of (K + s N)^{-1} [0; 0; -M u], whose eigenvalues are
/// 1 / (lambda - s). Converged pairs are locked and the iteration is repeated
/// on the M-orthogonal complement until no further eigenvalue enters the
/// wanted range, which recovers multiple eigenvalues.
std::vector<EigenSolution> solve_eigen(const ConstrainedSystem& system, int m, const EigenOptions& options = {});

struct SourceSolution {
  Eigen::VectorXd sigma;  ///< n_sigma + 1, multiplier last
  Eigen::VectorXd u;
  double residual = 0.0;  ///< ||K x - b|| / ||b||, zero for a zero right-hand side
};

/// Discrete source problem with right-hand side -(f, v) for f given by velocity coefficients.
SourceSolution solve_source(const ConstrainedSystem& system, const Eigen::VectorXd& f);
SourceSolution solve_source(const ConstrainedSystem& system, const SaddlePointSolver& solver, const Eigen::VectorXd& f);

}  // namespace awstokes
