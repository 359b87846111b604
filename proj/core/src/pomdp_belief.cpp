#include "encsched/pomdp_belief.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "encsched/errors.hpp"

namespace encsched {

namespace {

void check_belief(const std::vector<double>& probs) {
  if (probs.empty()) throw ConfigError("belief: must be nonempty");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12) {
      std::ostringstream os;
      os << "belief: negative entry " << p;
      throw ConfigError(os.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "belief: entries sum to " << sum << ", expected 1 within 1e-9";
    throw ConfigError(os.str());
  }
}

}  // namespace

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  check_belief(probs_);
  for (double& p : probs_) p = std::max(p, 0.0);
}

Belief Belief::point_mass(int index, int size) {
  if (size < 1 || index < 0 || index >= size) {
    throw InternalError("Belief::point_mass: index outside vector");
  }
  std::vector<double> probs(static_cast<std::size_t>(size), 0.0);
  probs[static_cast<std::size_t>(index)] = 1.0;
  return Belief(std::move(probs));
}

Belief belief_update(const Belief& pi, int action, const ChannelParams& ch) {
  const double r = eavesdrop_prob(action, ch);
  const int top = pi.size() - 1;
  std::vector<double> out(static_cast<std::size_t>(pi.size()), 0.0);
  if (top == 0) {
    out[0] = 1.0;
    return Belief(std::move(out));
  }
  out[0] = r;
  for (int i = 1; i < top; ++i) out[static_cast<std::size_t>(i)] = (1.0 - r) * pi[i - 1];
  // Mass shifted past the deepest rung accumulates there.
  out[static_cast<std::size_t>(top)] = (1.0 - r) * (pi[top - 1] + pi[top]);

  double sum = 0.0;
  for (double p : out) sum += p;
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& p : out) p /= sum;
  }
  return Belief(std::move(out));
}

double expected_eve_trace(const Belief& pi, const CovarianceLadder& ladder) {
  if (pi.size() != ladder.depth() + 1) {
    std::ostringstream os;
    os << "expected_eve_trace: belief length " << pi.size() << " != ladder size "
       << ladder.depth() + 1;
    throw InternalError(os.str());
  }
  double acc = 0.0;
  for (int i = 0; i < pi.size(); ++i) acc += pi[i] * ladder.trace(i);
  return acc;
}

BeliefTree::BeliefTree(int horizon, std::vector<std::vector<Belief>> levels)
    : horizon_(horizon), levels_(std::move(levels)) {}

int BeliefTree::level_size(int depth) const {
  if (depth < 0 || depth >= levels()) {
    throw InternalError("BeliefTree::level_size: depth " + std::to_string(depth) +
                        " outside 0.." + std::to_string(levels() - 1));
  }
  return static_cast<int>(levels_[static_cast<std::size_t>(depth)].size());
}

const Belief& BeliefTree::node(int depth, int local) const {
  if (depth < 0 || depth >= levels() || local < 0 || local >= level_size(depth)) {
    std::ostringstream os;
    os << "BeliefTree::node: (" << depth << "," << local << ") outside tree";
    throw InternalError(os.str());
  }
  return levels_[static_cast<std::size_t>(depth)][static_cast<std::size_t>(local)];
}

long BeliefTree::node_count() const {
  long total = 0;
  for (int d = 0; d < levels(); ++d) total += level_size(d);
  return total;
}

BeliefTree enumerate_belief_tree(const ChannelParams& ch, int horizon, int depth) {
  ch.validate();
  if (horizon < 1) throw ConfigError("enumerate_belief_tree: horizon must be >= 1");
  if (horizon > BeliefTree::kMaxHorizon) {
    std::ostringstream os;
    os << "enumerate_belief_tree: horizon " << horizon << " exceeds the cap of "
       << BeliefTree::kMaxHorizon << " (tree size 2^N - 1)";
    throw ConfigError(os.str());
  }
  if (depth < 1) throw ConfigError("enumerate_belief_tree: depth must be >= 1");

  std::vector<std::vector<Belief>> levels;
  levels.reserve(static_cast<std::size_t>(horizon));
  levels.push_back({Belief::point_mass(0, depth + 1)});
  for (int d = 1; d < horizon; ++d) {
    const std::vector<Belief>& prev = levels.back();
    std::vector<Belief> cur;
    cur.reserve(prev.size() * 2);
    for (const Belief& pi : prev) {
      cur.push_back(belief_update(pi, 0, ch));
      cur.push_back(belief_update(pi, 1, ch));
    }
    levels.push_back(std::move(cur));
  }
  return BeliefTree(horizon, std::move(levels));
}

BeliefValueTable::BeliefValueTable(int horizon, int grid_max)
    : horizon_(horizon), grid_max_(grid_max) {
  stages_.reserve(static_cast<std::size_t>(horizon));
  for (int k = 1; k <= horizon; ++k) {
    stages_.push_back(Eigen::MatrixXd::Zero(1L << (k - 1), grid_max + 1));
  }
}

Eigen::MatrixXd& BeliefValueTable::stage(int k) {
  if (k < 1 || k > horizon_) {
    throw InternalError("BeliefValueTable::stage: k=" + std::to_string(k) + " outside 1.." +
                        std::to_string(horizon_));
  }
  return stages_[static_cast<std::size_t>(k - 1)];
}

const Eigen::MatrixXd& BeliefValueTable::stage(int k) const {
  return const_cast<BeliefValueTable*>(this)->stage(k);
}

BeliefPolicy::BeliefPolicy(int horizon, int grid_max) : horizon_(horizon), grid_max_(grid_max) {
  stages_.reserve(static_cast<std::size_t>(horizon));
  for (int k = 1; k <= horizon; ++k) {
    stages_.push_back(Eigen::MatrixXi::Zero(1L << (k - 1), grid_max + 1));
  }
}

Eigen::MatrixXi& BeliefPolicy::stage(int k) {
  if (k < 1 || k > horizon_) {
    throw InternalError("BeliefPolicy::stage: k=" + std::to_string(k) + " outside 1.." +
                        std::to_string(horizon_));
  }
  return stages_[static_cast<std::size_t>(k - 1)];
}

const Eigen::MatrixXi& BeliefPolicy::stage(int k) const {
  return const_cast<BeliefPolicy*>(this)->stage(k);
}

BeliefSolution pomdp_backward_induction(const ProblemParams& params,
                                        const CovarianceLadder& ladder, const BeliefTree& tree) {
  params.validate();
  const int N = params.horizon;
  const int D = ladder.depth();
  if (tree.horizon() != N) {
    std::ostringstream os;
    os << "pomdp_backward_induction: tree horizon " << tree.horizon() << " != problem horizon "
       << N;
    throw ConfigError(os.str());
  }
  if (D < N + 1) {
    std::ostringstream os;
    os << "pomdp_backward_induction: ladder depth " << D << " < horizon+1 = " << N + 1;
    throw ConfigError(os.str());
  }

  const double q[2] = {arrival_prob(0, params.channel), arrival_prob(1, params.channel)};
  BeliefSolution sol{BeliefValueTable(N, D), BeliefPolicy(N, D)};
  for (int k = N; k >= 1; --k) {
    Eigen::MatrixXd& cur = sol.values.stage(k);
    Eigen::MatrixXi& act = sol.policy.stage(k);
    const int nodes = tree.level_size(k - 1);
    for (int j = 0; j < nodes; ++j) {
      const Belief& pi = tree.node(k - 1, j);
      // Post-action beliefs: tree children below the last level, computed
      // directly at the leaves (the terminal value is zero there anyway).
      double eve_trace[2];
      for (int a = 0; a < 2; ++a) {
        const Belief child = (k < N) ? tree.node(k, 2 * j + a) : belief_update(pi, a, params.channel);
        eve_trace[a] = expected_eve_trace(child, ladder);
      }
      for (int n = 0; n <= D; ++n) {
        const int up = std::min(n + 1, D);
        double best = 0.0;
        int best_a = 0;
        for (int a = 0; a < 2; ++a) {
          const double remote = q[a] * ladder.trace(0) + (1.0 - q[a]) * ladder.trace(up);
          double value = a * params.enc_cost + params.beta * remote -
                         (1.0 - params.beta) * eve_trace[a];
          if (k < N) {
            const Eigen::MatrixXd& next = sol.values.stage(k + 1);
            value += q[a] * next(2 * j + a, 0) + (1.0 - q[a]) * next(2 * j + a, up);
          }
          if (a == 0 || value < best) {
            best = value;
            best_a = a;
          }
        }
        cur(j, n) = best;
        act(j, n) = best_a;
      }
    }
  }
  return sol;
}

BeliefThresholds certify_belief_thresholds(const BeliefPolicy& policy) {
  BeliefThresholds result;
  result.m.resize(static_cast<std::size_t>(policy.horizon()));
  for (int k = 1; k <= policy.horizon(); ++k) {
    const Eigen::MatrixXi& stage = policy.stage(k);
    auto& row = result.m[static_cast<std::size_t>(k - 1)];
    row.resize(static_cast<std::size_t>(stage.rows()));
    for (int j = 0; j < stage.rows(); ++j) {
      int first_zero = -1;
      for (int n = 0; n < stage.cols(); ++n) {
        if (stage(j, n) == 0) {
          if (first_zero < 0) first_zero = n;
        } else if (first_zero >= 0) {
          std::ostringstream os;
          os << "belief policy at k=" << k << ", node=" << j
             << ": encrypt set is not a prefix in n (1 at n=" << n << " after 0 at n="
             << first_zero << "; slice =";
          for (int n2 = 0; n2 < stage.cols(); ++n2) os << ' ' << stage(j, n2);
          os << ")";
          throw StructureViolation(os.str());
        }
      }
      if (first_zero == 0) {
        row[static_cast<std::size_t>(j)] = std::nullopt;
      } else if (first_zero < 0) {
        row[static_cast<std::size_t>(j)] = static_cast<int>(stage.cols()) - 1;
      } else {
        row[static_cast<std::size_t>(j)] = first_zero - 1;
      }
    }
  }
  return result;
}

}  // namespace encsched
