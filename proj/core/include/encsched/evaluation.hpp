#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "encsched/pomdp_belief.hpp"
#include "encsched/rng.hpp"

namespace encsched {

enum class StrategyKind {
  never,            // theta1: a_k = 0 for all k
  always,           // theta2: a_k = 1 for all k
  optimal_known,    // theta*1: solved full-information policy
  optimal_unknown,  // theta*2: solved belief policy
  explicit_table,   // user-supplied full-information table
};

// A schedule the evaluators can query for an action. Full-information
// strategies map (k, n, n_e); belief strategies map (k, belief node, n)
// with the node advanced by the chosen action.
class Strategy {
 public:
  static Strategy never();
  static Strategy always();
  static Strategy optimal_known(PolicyTable table);
  static Strategy optimal_unknown(BeliefPolicy policy, BeliefTree tree);
  static Strategy explicit_table(PolicyTable table);

  StrategyKind kind() const { return kind_; }
  bool uses_belief() const { return kind_ == StrategyKind::optimal_unknown; }
  const char* name() const;

  // Throws ConfigError when the payload does not cover the horizon.
  void check_horizon(int horizon) const;

  int action(int k, int n, int n_e) const;
  int action_belief(int k, int node, int n) const;
  const BeliefTree& tree() const;

 private:
  explicit Strategy(StrategyKind kind) : kind_(kind) {}

  StrategyKind kind_;
  std::shared_ptr<const PolicyTable> table_;
  std::shared_ptr<const BeliefPolicy> belief_policy_;
  std::shared_ptr<const BeliefTree> tree_;
};

// Evaluation output: the three comparison columns plus the realized
// encryption count, with standard errors where the numbers are Monte
// Carlo estimates (exact evaluation reports zero standard errors).
struct SimReport {
  double sum_remote_trace = 0.0;  // E[sum_k tr(P_k)]
  double sum_eve_trace = 0.0;     // E[sum_k tr(P_{e,k})]
  double sum_encrypt = 0.0;       // E[sum_k a_k]
  double total_cost = 0.0;        // J, accumulated independently

  double se_remote = 0.0;
  double se_eve = 0.0;
  double se_encrypt = 0.0;
  double se_cost = 0.0;

  long trials = 0;  // 0 for exact evaluation
  std::uint64_t seed = 0;

  // E[tr(P_k)] per step k = 1..N; filled by exact evaluation.
  std::vector<double> remote_trace_per_step;
};

// Exact expectations by forward propagation of the finite joint chain:
// over (n, n_e) for full-information strategies, over (n, belief node)
// for belief strategies with Eve's conditional distribution carried in
// the node's belief.
SimReport evaluate_policy_exact(const Strategy& strategy, const ProblemParams& params,
                                const CovarianceLadder& ladder);

// Monte Carlo over the outcome process (gamma, gamma_e). Trial t draws
// from SplitMix64::for_stream(seed, t), gamma before gamma_e each step,
// so the report is a pure function of (strategy, params, trials, seed).
SimReport simulate(const Strategy& strategy, const ProblemParams& params,
                   const CovarianceLadder& ladder, long trials, std::uint64_t seed);

// One sampled run of the full state-space model: plant, measurements,
// steady-state local filter, remote and eavesdropper estimates.
struct TrajectoryRecord {
  std::vector<Eigen::VectorXd> state;            // x_0 .. x_N
  std::vector<Eigen::VectorXd> measurement;      // y_1 .. y_N
  std::vector<Eigen::VectorXd> local_estimate;   // sensor filter, 0 .. N
  std::vector<Eigen::VectorXd> remote_estimate;  // 0 .. N
  std::vector<Eigen::VectorXd> eve_estimate;     // 0 .. N
  std::vector<int> action;                       // a_1 .. a_N
  std::vector<int> received;                     // gamma_1 .. gamma_N
  std::vector<int> intercepted;                  // gamma_e,1 .. gamma_e,N
  std::vector<int> remote_index;                 // ladder index after step 0 .. N
  std::vector<int> eve_index;
};

// The local filter starts in steady state: the initial estimation error
// is drawn from N(0, P*), which the steady gain then preserves exactly,
// so the empirical squared remote error matches E[tr(P_k)] step by step.
// Draw order per step: w, v, gamma, gamma_e (Gaussian vectors filled in
// index order).
TrajectoryRecord simulate_trajectory(const ProblemParams& params, const Strategy& strategy,
                                     const CovarianceLadder& ladder, std::uint64_t seed);

struct StrategyComparison {
  std::string name;
  SimReport monte_carlo;
  SimReport exact;
};

// Solves both scheduling problems and evaluates the four standard
// strategies, Monte Carlo and exactly. Rows in order theta1, theta2,
// theta_star1, theta_star2.
std::vector<StrategyComparison> compare_strategies(const ProblemParams& params,
                                                   const CovarianceLadder& ladder, long trials,
                                                   std::uint64_t seed);

}  // namespace encsched
