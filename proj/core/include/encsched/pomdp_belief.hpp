#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "encsched/mdp_full_info.hpp"

namespace encsched {

// Probability distribution over Eve's ladder index. The update is a
// deterministic function of the action, so all reachable beliefs form a
// binary tree over action histories.
class Belief {
 public:
  explicit Belief(std::vector<double> probs);
  static Belief point_mass(int index, int size);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// One application of the belief recursion: with r = eavesdrop_prob(a),
// out[0] = r and out[i] = (1-r) * pi[i-1], the top entry absorbing the
// shifted-out mass. Renormalizes only if the total drifts past 1e-12.
Belief belief_update(const Belief& pi, int action, const ChannelParams& ch);

// E[tr P_e] under the belief: dot product with the ladder traces.
double expected_eve_trace(const Belief& pi, const CovarianceLadder& ladder);

// All beliefs reachable by action sequences of length < N, stored by
// depth. Node (depth d, local j) has children (d+1, 2j+a); local indices
// read as the action history in binary with the first action as the most
// significant bit. Size 2^N - 1, so N is capped.
class BeliefTree {
 public:
  static constexpr int kMaxHorizon = 20;

  BeliefTree(int horizon, std::vector<std::vector<Belief>> levels);

  int horizon() const { return horizon_; }
  int levels() const { return static_cast<int>(levels_.size()); }
  int level_size(int depth) const;
  const Belief& node(int depth, int local) const;
  long node_count() const;

  // Global node id: levels are numbered breadth-first, root = 0.
  static long node_id(int depth, int local) { return (1L << depth) - 1 + local; }

 private:
  int horizon_;
  std::vector<std::vector<Belief>> levels_;
};

BeliefTree enumerate_belief_tree(const ChannelParams& ch, int horizon, int depth);

// Cost-to-go per (k, belief node at depth k-1, remote index n).
class BeliefValueTable {
 public:
  BeliefValueTable(int horizon, int grid_max);

  int horizon() const { return horizon_; }
  int grid_max() const { return grid_max_; }

  // Rows = belief nodes at depth k-1, cols = remote index n.
  Eigen::MatrixXd& stage(int k);
  const Eigen::MatrixXd& stage(int k) const;
  double root_value() const { return stage(1)(0, 0); }

 private:
  int horizon_;
  int grid_max_;
  std::vector<Eigen::MatrixXd> stages_;
};

// Argmin actions per (k, node, n); ties resolve to 0.
class BeliefPolicy {
 public:
  BeliefPolicy(int horizon, int grid_max);

  int horizon() const { return horizon_; }
  int grid_max() const { return grid_max_; }

  Eigen::MatrixXi& stage(int k);
  const Eigen::MatrixXi& stage(int k) const;
  int at(int k, int node, int n) const { return stage(k)(node, n); }

 private:
  int horizon_;
  int grid_max_;
  std::vector<Eigen::MatrixXi> stages_;
};

struct BeliefSolution {
  BeliefValueTable values;
  BeliefPolicy policy;
};

// Backward induction over the belief tree. The stage cost charges
//   a*C + beta * E[tr P_k | n, a] - (1-beta) * expected Eve trace under
// the post-action belief; the remote outcome is the only stochastic part
// of the transition. Deterministic; ties to action 0.
BeliefSolution pomdp_backward_induction(const ProblemParams& params,
                                        const CovarianceLadder& ladder, const BeliefTree& tree);

// Threshold m(k, node) of the 1-prefix in n for every stage and node, or
// nullopt where the encrypt set is empty. Throws StructureViolation on a
// non-prefix slice.
struct BeliefThresholds {
  // m[k-1][local node index at depth k-1]
  std::vector<std::vector<std::optional<int>>> m;
};

BeliefThresholds certify_belief_thresholds(const BeliefPolicy& policy);

}  // namespace encsched
