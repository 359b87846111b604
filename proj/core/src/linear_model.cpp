#include "encsched/linear_model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <sstream>

#include "encsched/errors.hpp"

namespace encsched {

namespace {

constexpr double kSymTol = 1e-9;
constexpr double kEigTol = 1e-9;
constexpr double kRankTol = 1e-8;

void require_square(const Eigen::MatrixXd& M, int n, const char* name) {
  if (M.rows() != n || M.cols() != n) {
    std::ostringstream os;
    os << name << ": expected " << n << "x" << n << ", got " << M.rows() << "x" << M.cols();
    throw ConfigError(os.str());
  }
}

void require_symmetric(const Eigen::MatrixXd& M, const char* name) {
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > kSymTol) {
    throw ConfigError(std::string(name) + ": not symmetric within 1e-9");
  }
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  return es.eigenvalues().minCoeff();
}

int numerical_rank(const Eigen::MatrixXd& M) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  qr.setThreshold(kRankTol);
  return static_cast<int>(qr.rank());
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

void SystemModel::validate() const {
  const int n = state_dim();
  if (n < 1) throw ConfigError("A: must be a nonempty square matrix");
  if (A.cols() != n) throw ConfigError("A: must be square");
  const int m = obs_dim();
  if (m < 1 || C.cols() != n) {
    std::ostringstream os;
    os << "C: expected m x " << n << " with m >= 1, got " << C.rows() << "x" << C.cols();
    throw ConfigError(os.str());
  }
  require_square(Q, n, "Q");
  require_square(Pi0, n, "Pi0");
  require_square(R, m, "R");
  require_symmetric(Q, "Q");
  require_symmetric(R, "R");
  require_symmetric(Pi0, "Pi0");
  if (min_eigenvalue(Q) < -kEigTol) throw ConfigError("Q: not positive semidefinite");
  if (min_eigenvalue(Pi0) < -kEigTol) throw ConfigError("Pi0: not positive semidefinite");
  if (min_eigenvalue(R) <= kEigTol) throw ConfigError("R: not positive definite");

  // Controllability of (A, sqrt(Q)) via the rank of [B, AB, ..., A^{n-1}B].
  const Eigen::MatrixXd B = psd_sqrt(Q);
  Eigen::MatrixXd ctrb(n, n * n);
  Eigen::MatrixXd Ak = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    ctrb.middleCols(i * n, n) = Ak * B;
    Ak = A * Ak;
  }
  if (numerical_rank(ctrb) < n) {
    throw ConfigError("(A, sqrt(Q)): not controllable (controllability matrix rank deficient)");
  }

  // Observability of (A, C); if the observability matrix is rank deficient,
  // fall back to the PBH detectability test so that plants whose
  // unobservable modes are all stable still pass.
  Eigen::MatrixXd obsv(m * n, n);
  Ak = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    obsv.middleRows(i * m, m) = C * Ak;
    Ak = A * Ak;
  }
  if (numerical_rank(obsv) < n) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    for (int i = 0; i < n; ++i) {
      const std::complex<double> mu = es.eigenvalues()(i);
      if (std::abs(mu) < 1.0 - kRankTol) continue;
      Eigen::MatrixXcd pbh(n + m, n);
      pbh.topRows(n) = A.cast<std::complex<double>>() -
                       mu * Eigen::MatrixXcd::Identity(n, n);
      pbh.bottomRows(m) = C.cast<std::complex<double>>();
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(pbh);
      qr.setThreshold(kRankTol);
      if (static_cast<int>(qr.rank()) < n) {
        std::ostringstream os;
        os << "(A, C): undetectable mode at eigenvalue " << mu.real();
        if (mu.imag() != 0.0) os << (mu.imag() > 0 ? "+" : "") << mu.imag() << "i";
        throw ConfigError(os.str());
      }
    }
  }
}

Eigen::MatrixXd lyapunov_step(const SystemModel& model, const Eigen::MatrixXd& X) {
  const int n = model.state_dim();
  if (X.rows() != n || X.cols() != n) {
    std::ostringstream os;
    os << "lyapunov_step: X must be " << n << "x" << n << ", got " << X.rows() << "x" << X.cols();
    throw ConfigError(os.str());
  }
  return symmetrized(model.A * X * model.A.transpose() + model.Q);
}

namespace {

// One measurement-update Riccati step; throws on singular innovation.
Eigen::MatrixXd riccati_step(const SystemModel& model, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd Pbar = symmetrized(model.A * P * model.A.transpose() + model.Q);
  const Eigen::MatrixXd S = model.C * Pbar * model.C.transpose() + model.R;
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrized(S));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("steady_state_covariance: singular innovation covariance");
  }
  const Eigen::MatrixXd K = llt.solve(model.C * Pbar.transpose()).transpose();
  const int n = model.state_dim();
  return symmetrized((Eigen::MatrixXd::Identity(n, n) - K * model.C) * Pbar);
}

}  // namespace

Eigen::MatrixXd steady_state_covariance(const SystemModel& model, double tol, long max_iter) {
  model.validate();
  if (!(tol > 0.0)) throw ConfigError("steady_state_covariance: tol must be > 0");
  if (max_iter < 1) throw ConfigError("steady_state_covariance: max_iter must be >= 1");

  Eigen::MatrixXd P = symmetrized(model.Pi0);
  double residual = 0.0;
  for (long it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd next = riccati_step(model, P);
    residual = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (residual < tol) return P;
  }
  std::ostringstream os;
  os << "steady_state_covariance: no convergence after " << max_iter
     << " iterations (last residual " << residual << ", tol " << tol << ")";
  throw NumericalError(os.str());
}

Eigen::MatrixXd steady_state_gain(const SystemModel& model, const Eigen::MatrixXd& Pstar) {
  const Eigen::MatrixXd Pbar =
      symmetrized(model.A * Pstar * model.A.transpose() + model.Q);
  const Eigen::MatrixXd S = model.C * Pbar * model.C.transpose() + model.R;
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrized(S));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("steady_state_gain: singular innovation covariance");
  }
  return llt.solve(model.C * Pbar.transpose()).transpose();
}

const Eigen::MatrixXd& CovarianceLadder::rung(int i) const {
  if (i < 0 || i > depth()) {
    throw InternalError("CovarianceLadder::rung: index " + std::to_string(i) +
                        " outside 0.." + std::to_string(depth()));
  }
  return rungs[static_cast<std::size_t>(i)];
}

double CovarianceLadder::trace(int i) const {
  if (i < 0 || i > depth()) {
    throw InternalError("CovarianceLadder::trace: index " + std::to_string(i) +
                        " outside 0.." + std::to_string(depth()));
  }
  return traces[static_cast<std::size_t>(i)];
}

double CovarianceLadder::next_trace(int i) const { return trace(std::min(i + 1, depth())); }

CovarianceLadder build_ladder(const SystemModel& model, int depth, double tol, long max_iter) {
  if (depth < 0) throw ConfigError("build_ladder: depth must be >= 0");
  CovarianceLadder ladder;
  ladder.rungs.reserve(static_cast<std::size_t>(depth) + 1);
  ladder.traces.reserve(static_cast<std::size_t>(depth) + 1);
  Eigen::MatrixXd X = steady_state_covariance(model, tol, max_iter);
  ladder.rungs.push_back(X);
  ladder.traces.push_back(X.trace());
  for (int i = 0; i < depth; ++i) {
    X = lyapunov_step(model, X);
    ladder.rungs.push_back(X);
    ladder.traces.push_back(X.trace());
  }
  return ladder;
}

}  // namespace encsched
