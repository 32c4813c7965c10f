#include "awstokes/eigensolver.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Dense>
#include <Eigen/UmfPackSupport>

namespace awstokes {

struct SaddlePointSolver::Impl {
  SparseMatrix matrix;  // UmfPackLU refers to the factored matrix during solves
  Eigen::UmfPackLU<SparseMatrix> lu;
};

namespace {

SparseMatrix shifted(const ConstrainedSystem& cs, double shift) {
  if (shift == 0.0) return cs.K;
  SparseMatrix n(cs.size(), cs.size());
  std::vector<Eigen::Triplet<double>> tn;
  const SparseMatrix& m = cs.system.M;
  const int off = cs.velocity_offset();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) tn.emplace_back(off + it.row(), off + it.col(), it.value());
  n.setFromTriplets(tn.begin(), tn.end());
  return cs.K + shift * n;
}

}  // namespace

SaddlePointSolver::SaddlePointSolver(const ConstrainedSystem& system, double shift)
    : impl_(std::make_unique<Impl>()), shift_(shift) {
  // A singular shifted matrix means the shift hit an eigenvalue: nudge it and retry.
  for (int attempt = 0; attempt < 3; ++attempt) {
    impl_->matrix = shifted(system, shift_);
    impl_->matrix.makeCompressed();
    impl_->lu.compute(impl_->matrix);
    if (impl_->lu.info() == Eigen::Success) return;
    shift_ += 1e-3 * (std::abs(shift_) + 1.0);
  }
  throw SolverError("saddle-point factorization failed");
}

SaddlePointSolver::~SaddlePointSolver() = default;
SaddlePointSolver::SaddlePointSolver(SaddlePointSolver&&) noexcept = default;
SaddlePointSolver& SaddlePointSolver::operator=(SaddlePointSolver&&) noexcept = default;

Eigen::VectorXd SaddlePointSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("saddle-point solve failed");
  return x;
}

namespace {

/// Velocity solution operator and the M inner product it is self-adjoint in.
class VelocityOperator {
 public:
  VelocityOperator(const ConstrainedSystem& cs, const SaddlePointSolver& solver) : cs_(cs), solver_(solver) {}

  Eigen::VectorXd full(const Eigen::VectorXd& y) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(cs_.size());
    rhs.tail(cs_.n_u()) = -(cs_.system.M * y);
    return solver_.solve(rhs);
  }
  Eigen::VectorXd apply(const Eigen::VectorXd& y) const { return full(y).tail(cs_.n_u()); }
  double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(cs_.system.M * b); }
  double norm(const Eigen::VectorXd& a) const { return std::sqrt(std::max(dot(a, a), 0.0)); }
  int size() const { return cs_.n_u(); }

 private:
  const ConstrainedSystem& cs_;
  const SaddlePointSolver& solver_;
};

struct RitzPair {
  double theta;
  Eigen::VectorXd u;
};

/// M-orthogonalizes w against the columns of q (two passes).
void orthogonalize(const VelocityOperator& op, Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& q) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& v : q) w -= op.dot(v, w) * v;
}

/// Lanczos with full reorthogonalization and explicit restarts on the
/// complement of `locked`. Returns up to `want` converged pairs, largest theta first.
std::vector<RitzPair> lanczos(const VelocityOperator& op, const std::vector<Eigen::VectorXd>& locked, int want,
                              const EigenOptions& opt, std::mt19937_64& rng, int max_restarts, int& iterations) {
  const int free_dim = op.size() - static_cast<int>(locked.size());
  want = std::min(want, free_dim);
  if (want <= 0) return {};
  const int max_dim = std::min(free_dim, std::max(opt.max_krylov, 2 * want + 20));

  std::normal_distribution<double> normal;
  Eigen::VectorXd start(op.size());
  for (Eigen::Index i = 0; i < start.size(); ++i) start(i) = normal(rng);

  for (int restart = 0; restart <= max_restarts; ++restart) {
    orthogonalize(op, start, locked);
    double nrm = op.norm(start);
    if (nrm == 0.0) throw SolverError("lanczos: start vector vanished after deflation");
    std::vector<Eigen::VectorXd> q{start / nrm};
    std::vector<double> alpha, beta;
    std::vector<Eigen::VectorXd> basis_with_locked = locked;
    Eigen::MatrixXd ritz_vectors;
    Eigen::VectorXd theta;

    bool invariant = false;
    for (int j = 0; j < max_dim; ++j) {
      Eigen::VectorXd w = op.apply(q[static_cast<std::size_t>(j)]);
      ++iterations;
      const double a = op.dot(q[static_cast<std::size_t>(j)], w);
      alpha.push_back(a);
      w -= a * q[static_cast<std::size_t>(j)];
      if (j > 0) w -= beta.back() * q[static_cast<std::size_t>(j - 1)];
      orthogonalize(op, w, locked);
      orthogonalize(op, w, q);
      const double b = op.norm(w);

      const int dim = j + 1;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      // ascending; wanted are the largest
      theta = es.eigenvalues().reverse();
      ritz_vectors = es.eigenvectors().rowwise().reverse();

      invariant = b <= 1e-14 * std::abs(theta(0));
      const int have = std::min(want, dim);
      bool converged = have == want;
      for (int i = 0; i < have && converged; ++i)
        converged = theta(i) > 0.0 && b * std::abs(ritz_vectors(dim - 1, i)) <= opt.tol * theta(i);
      if (converged || invariant) {
        std::vector<RitzPair> out;
        for (int i = 0; i < have; ++i) {
          Eigen::VectorXd u = Eigen::VectorXd::Zero(op.size());
          for (int k = 0; k < dim; ++k) u += ritz_vectors(k, i) * q[static_cast<std::size_t>(k)];
          u /= op.norm(u);
          out.push_back({theta(i), std::move(u)});
        }
        return out;
      }
      beta.push_back(b);
      q.push_back(w / b);
    }
    // Explicit restart from the sum of the wanted Ritz vectors.
    start = Eigen::VectorXd::Zero(op.size());
    const int dim = static_cast<int>(alpha.size());
    for (int i = 0; i < std::min(want, dim); ++i)
      for (int k = 0; k < dim; ++k) start += ritz_vectors(k, i) * q[static_cast<std::size_t>(k)];
  }
  throw SolverError("lanczos: no convergence within the restart budget");
}

double relative(double num, double scale) { return scale > 0.0 ? num / scale : num; }

}  // namespace

std::vector<EigenSolution> solve_eigen(const ConstrainedSystem& cs, int m, const EigenOptions& options) {
  if (m < 1 || m > cs.n_u()) throw InvalidArgument("solve_eigen: requested count outside [1, n_u]");
  const SaddlePointSolver solver(cs, options.shift);
  const double s = solver.shift();
  const VelocityOperator op(cs, solver);
  std::mt19937_64 rng(options.seed);
  const int max_restarts = options.max_restarts > 0 ? options.max_restarts : 10 * m;

  std::vector<RitzPair> locked;
  int iterations = 0;
  for (int round = 0;; ++round) {
    std::vector<Eigen::VectorXd> locked_vectors;
    for (const auto& p : locked) locked_vectors.push_back(p.u);
    std::vector<RitzPair> found = lanczos(op, locked_vectors, m, options, rng, max_restarts, iterations);
    const bool full = locked.size() == static_cast<std::size_t>(m);
    const double threshold = full ? locked.back().theta : 0.0;
    const std::size_t searched = locked_vectors.size() + found.size();
    bool entered = false;
    for (auto& p : found) {
      if (full && p.theta <= threshold * (1.0 + 1e3 * options.tol)) continue;
      entered = true;
      locked.push_back(std::move(p));
    }
    std::stable_sort(locked.begin(), locked.end(), [](const auto& a, const auto& b) { return a.theta > b.theta; });
    if (locked.size() > static_cast<std::size_t>(m)) locked.resize(static_cast<std::size_t>(m));
    // A single wanted eigenvalue is taken as simple; for m > 1 one extra deflated
    // run confirms that no copy of a multiple eigenvalue was missed.
    if (m == 1 || (round > 0 && !entered) || searched >= static_cast<std::size_t>(cs.n_u())) break;
    if (round >= max_restarts) throw SolverError("solve_eigen: locking did not stabilize");
  }

  const int ns = cs.n_sigma();
  std::vector<EigenSolution> out;
  for (const auto& p : locked) {
    if (!(p.theta > 0.0)) throw SolverError("solve_eigen: non-positive Ritz value; shift above the spectrum?");
    EigenSolution sol;
    sol.lambda = s + 1.0 / p.theta;
    sol.iterations = iterations;
    const Eigen::VectorXd x = (sol.lambda - s) * op.full(p.u);
    sol.sigma = x.head(ns + 1);
    sol.u = s == 0.0 ? p.u : Eigen::VectorXd(x.tail(cs.n_u()));
    const double scale = op.norm(sol.u);
    sol.u /= scale;
    sol.sigma /= scale;
    Eigen::Index imax = 0;
    sol.u.cwiseAbs().maxCoeff(&imax);
    if (sol.u(imax) < 0.0) {
      sol.u = -sol.u;
      sol.sigma = -sol.sigma;
    }
    const GlobalSystem& g = cs.system;
    const Eigen::VectorXd sig = sol.sigma.head(ns);
    const double rho = sol.sigma(ns);
    const Eigen::VectorXd a_s = g.A * sig;
    const Eigen::VectorXd bt_u = g.B.transpose() * sol.u;
    sol.residual_stress =
        relative((a_s + rho * g.c + bt_u).norm(), a_s.norm() + bt_u.norm() + std::abs(rho) * g.c.norm());
    const Eigen::VectorXd b_s = g.B * sig;
    const Eigen::VectorXd m_u = sol.lambda * (g.M * sol.u);
    sol.residual_velocity = relative((b_s + m_u).norm(), b_s.norm() + m_u.norm());
    out.push_back(std::move(sol));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

SourceSolution solve_source(const ConstrainedSystem& cs, const Eigen::VectorXd& f) {
  const SaddlePointSolver solver(cs);
  return solve_source(cs, solver, f);
}

SourceSolution solve_source(const ConstrainedSystem& cs, const SaddlePointSolver& solver, const Eigen::VectorXd& f) {
  if (f.size() != cs.n_u()) throw InvalidArgument("solve_source: right-hand side has the wrong size");
  if (solver.shift() != 0.0) throw InvalidArgument("solve_source: solver must be unshifted");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(cs.size());
  rhs.tail(cs.n_u()) = -(cs.system.M * f);
  SourceSolution out;
  const Eigen::VectorXd x = solver.solve(rhs);
  out.sigma = x.head(cs.n_sigma() + 1);
  out.u = x.tail(cs.n_u());
  const double bn = rhs.norm();
  out.residual = bn > 0.0 ? (cs.K * x - rhs).norm() / bn : (cs.K * x).norm();
  return out;
}

}  // namespace awstokes
