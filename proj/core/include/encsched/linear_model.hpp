#pragma once

#include <Eigen/Dense>
#include <vector>

namespace encsched {

// Discrete LTI plant x_{k+1} = A x_k + w_k, y_k = C x_k + v_k with
// w ~ N(0, Q), v ~ N(0, R) and initial state covariance Pi0.
struct SystemModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd C;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  Eigen::MatrixXd Pi0;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int obs_dim() const { return static_cast<int>(C.rows()); }

  // Checks dimensions, symmetry/definiteness of Q, R, Pi0, controllability
  // of (A, sqrt(Q)) and detectability of (A, C). Throws ConfigError.
  //
  // Note on detectability: the steady-state filter exists whenever every
  // unstable mode is observable, so rank deficiency of the observability
  // matrix is accepted as long as the unobservable subspace is stable
  // (PBH test). A plant with an unstable unobservable mode is rejected.
  void validate() const;
};

// Open-loop covariance update h(X) = A X A' + Q. Result is symmetrized
// as (Y + Y')/2 to kill rounding drift.
Eigen::MatrixXd lyapunov_step(const SystemModel& model, const Eigen::MatrixXd& X);

// Symmetric PSD square root via eigendecomposition; tiny negative
// eigenvalues are clamped to zero. Used for noise sampling and the
// controllability check.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M);

// Steady-state a-posteriori error covariance P* of the Kalman filter,
// computed by fixed-point iteration of the measurement-update recursion
//   Pbar = A P A' + Q,  K = Pbar C' (C Pbar C' + R)^{-1},  P = (I - K C) Pbar
// starting from Pi0, until the max-abs elementwise change drops below tol.
// Throws NumericalError on non-convergence or a singular innovation
// covariance.
Eigen::MatrixXd steady_state_covariance(const SystemModel& model, double tol = 1e-12,
                                        long max_iter = 1000000);

// Steady-state Kalman gain K* for the filter running at Pstar.
Eigen::MatrixXd steady_state_gain(const SystemModel& model, const Eigen::MatrixXd& Pstar);

// The chain P*, h(P*), h^2(P*), ..., h^depth(P*) with cached traces.
// Traces are nondecreasing in the index; every rung is symmetric PSD.
struct CovarianceLadder {
  std::vector<Eigen::MatrixXd> rungs;
  std::vector<double> traces;

  // Highest power of h stored; rungs has depth() + 1 entries.
  int depth() const { return static_cast<int>(rungs.size()) - 1; }

  const Eigen::MatrixXd& rung(int i) const;
  double trace(int i) const;

  // Trace one step up the ladder with the top rung absorbing. Exact for
  // every state reachable within the horizon when depth >= N + 1.
  double next_trace(int i) const;
};

CovarianceLadder build_ladder(const SystemModel& model, int depth, double tol = 1e-12,
                              long max_iter = 1000000);

}  // namespace encsched
