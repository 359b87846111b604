#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "encsched/channel.hpp"
#include "encsched/linear_model.hpp"

namespace encsched {

// The scheduling problem: plant + channel + cost weights over a finite
// horizon. beta weighs the remote error trace against Eve's (negated);
// enc_cost is the normalized per-use encryption cost.
struct ProblemParams {
  SystemModel model;
  ChannelParams channel;
  double beta = 0.5;
  double enc_cost = 0.0;
  int horizon = 1;

  void validate() const;
};

// State at decision time k: remote ladder index n (P_{k-1} = h^n(P*)) and
// eavesdropper ladder index n_e.
struct LadderState {
  int n;
  int n_e;
};

// Optimal cost-to-go V[k](n, n_e) for k = 1..N+1; V[N+1] is identically 0.
class ValueTable {
 public:
  ValueTable(int horizon, int grid_max);

  int horizon() const { return horizon_; }
  int grid_max() const { return grid_max_; }

  // (grid_max+1) x (grid_max+1), rows = n, cols = n_e.
  Eigen::MatrixXd& stage(int k);
  const Eigen::MatrixXd& stage(int k) const;
  double at(int k, int n, int n_e) const { return stage(k)(n, n_e); }

 private:
  int horizon_;
  int grid_max_;
  std::vector<Eigen::MatrixXd> stages_;  // index 0 -> k=1, ..., index N -> k=N+1
};

// Argmin actions a[k](n, n_e) in {0,1} for k = 1..N. Ties resolve to 0.
class PolicyTable {
 public:
  PolicyTable(int horizon, int grid_max);

  int horizon() const { return horizon_; }
  int grid_max() const { return grid_max_; }

  Eigen::MatrixXi& stage(int k);
  const Eigen::MatrixXi& stage(int k) const;
  int at(int k, int n, int n_e) const { return stage(k)(n, n_e); }

 private:
  int horizon_;
  int grid_max_;
  std::vector<Eigen::MatrixXi> stages_;  // index 0 -> k=1, ..., index N-1 -> k=N
};

struct FullInfoSolution {
  ValueTable values;
  PolicyTable policy;
};

// Expected one-stage cost of taking `action` in `state`:
//   a*C + beta * E[tr P_k] - (1-beta) * E[tr P_{e,k}]
// with E[tr P_k] = q*tr(P*) + (1-q)*tr(h^{n+1}(P*)), q = arrival_prob(a),
// and the mirror expression for Eve. Ladder indices one past the top rung
// read the top rung (saturating); exact for states reachable within the
// horizon when the ladder depth is at least N+1.
double stage_cost(const LadderState& state, int action, const ProblemParams& params,
                  const CovarianceLadder& ladder);

// Finite-horizon backward induction over the full index grid
// {0..depth}^2. Successors: both fail -> (n+1, n_e+1), remote-only
// succeeds -> (0, n_e+1), Eve-only succeeds -> (n+1, 0), both -> (0, 0),
// all saturating at the top rung. Deterministic; ties to action 0.
FullInfoSolution backward_induction(const ProblemParams& params, const CovarianceLadder& ladder);

// Action-value difference Q1 - Q0 at (k, state) given the cost-to-go
// tables for times > k. phi >= 0 means the optimal action is 0.
double phi(int k, const LadderState& state, const ValueTable& values,
           const ProblemParams& params, const CovarianceLadder& ladder);

// Largest m such that a[k](n, n_e) = 1 for all n <= m, or nullopt when the
// encrypt set is empty. Throws StructureViolation if the set is not a
// prefix, dumping the offending slice.
std::optional<int> extract_threshold_m(int k, int n_e, const PolicyTable& policy);

// Mirror image: smallest m_e such that a[k](n, n_e) = 1 for all
// n_e >= m_e, or nullopt. Throws StructureViolation if not a suffix.
std::optional<int> extract_threshold_me(int k, int n, const PolicyTable& policy);

}  // namespace encsched
