#pragma once

#include <vector>

#include "encsched/evaluation.hpp"
#include "encsched/rng.hpp"

namespace encsched::testing {

// Reference 2x2 plant used throughout: one unstable mode (1.5) observed
// directly, one stable mode (0.9) unobserved.
inline SystemModel reference_model() {
  SystemModel model;
  model.A = Eigen::MatrixXd{{1.5, 0.0}, {0.0, 0.9}};
  model.C = Eigen::MatrixXd{{1.0, 0.0}};
  model.Q = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  model.R = Eigen::MatrixXd{{0.6}};
  model.Pi0 = Eigen::MatrixXd::Identity(2, 2);
  return model;
}

inline ChannelParams reference_channel() { return ChannelParams{0.7, 0.7, 0.9, 0.18}; }

inline ProblemParams reference_params(int horizon) {
  ProblemParams params;
  params.model = reference_model();
  params.channel = reference_channel();
  params.beta = 0.5;
  params.enc_cost = 6.0;
  params.horizon = horizon;
  return params;
}

inline double uniform(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_double();
}

// Random observable/controllable diagonal 2x2 plant. The eigenvalue gap
// keeps the Riccati iteration well conditioned (nearly repeated modes
// with a single output are barely observable and converge glacially).
inline SystemModel random_model(SplitMix64& rng) {
  double a1 = uniform(rng, 0.3, 1.5);
  double a2 = uniform(rng, 0.3, 1.5);
  while (std::abs(a1 - a2) < 0.15) a2 = uniform(rng, 0.3, 1.5);
  SystemModel model;
  model.A = Eigen::MatrixXd{{a1, 0.0}, {0.0, a2}};
  model.C = Eigen::MatrixXd{{1.0, uniform(rng, 0.5, 1.5)}};
  model.Q = Eigen::Vector2d(uniform(rng, 0.2, 1.2), uniform(rng, 0.2, 1.2)).asDiagonal();
  model.R = Eigen::MatrixXd{{uniform(rng, 0.3, 1.2)}};
  model.Pi0 = Eigen::MatrixXd::Identity(2, 2);
  return model;
}

inline ProblemParams random_params(SplitMix64& rng, int horizon) {
  ProblemParams params;
  params.model = random_model(rng);
  params.channel.lambda = rng.next_double();
  params.channel.lambda_e = rng.next_double();
  params.channel.eps1 = rng.next_double();
  params.channel.eps2 = rng.next_double();
  params.beta = uniform(rng, 0.05, 0.95);
  params.enc_cost = uniform(rng, 0.0, 10.0);
  params.horizon = horizon;
  return params;
}

inline PolicyTable random_policy(SplitMix64& rng, int horizon, int grid_max) {
  PolicyTable policy(horizon, grid_max);
  for (int k = 1; k <= horizon; ++k) {
    for (int n = 0; n <= grid_max; ++n) {
      for (int ne = 0; ne <= grid_max; ++ne) {
        policy.stage(k)(n, ne) = rng.bernoulli(0.5) ? 1 : 0;
      }
    }
  }
  return policy;
}

// Decision slots reachable from (0, 0): at stage k both indices are below
// k. Used by the exhaustive-enumeration oracle.
inline std::vector<std::array<int, 3>> reachable_slots(int horizon) {
  std::vector<std::array<int, 3>> slots;
  for (int k = 1; k <= horizon; ++k) {
    for (int n = 0; n < k; ++n) {
      for (int ne = 0; ne < k; ++ne) slots.push_back({k, n, ne});
    }
  }
  return slots;
}

// Independent optimality oracle: exhaustively enumerates every assignment
// of actions to reachable decision slots and evaluates each policy table
// exactly. Exponential in the slot count; keep the horizon tiny.
inline double brute_force_min_cost(const ProblemParams& params, const CovarianceLadder& ladder) {
  const std::vector<std::array<int, 3>> slots = reachable_slots(params.horizon);
  const std::size_t count = slots.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t bits = 0; bits < (1ULL << count); ++bits) {
    PolicyTable table(params.horizon, ladder.depth());
    for (std::size_t i = 0; i < count; ++i) {
      const auto [k, n, ne] = slots[i];
      table.stage(k)(n, ne) = static_cast<int>((bits >> i) & 1ULL);
    }
    const SimReport report =
        evaluate_policy_exact(Strategy::explicit_table(std::move(table)), params, ladder);
    best = std::min(best, report.total_cost);
  }
  return best;
}

}  // namespace encsched::testing
