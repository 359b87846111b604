#include "encsched/mdp_full_info.hpp"

#include <algorithm>
#include <sstream>

#include "encsched/errors.hpp"

namespace encsched {

void ProblemParams::validate() const {
  model.validate();
  channel.validate();
  if (!(beta > 0.0 && beta < 1.0)) {
    std::ostringstream os;
    os << "beta: must lie strictly inside (0,1), got " << beta;
    throw ConfigError(os.str());
  }
  if (!(enc_cost >= 0.0)) {
    std::ostringstream os;
    os << "enc_cost: must be >= 0, got " << enc_cost;
    throw ConfigError(os.str());
  }
  if (horizon < 1) {
    std::ostringstream os;
    os << "horizon: must be >= 1, got " << horizon;
    throw ConfigError(os.str());
  }
}

ValueTable::ValueTable(int horizon, int grid_max) : horizon_(horizon), grid_max_(grid_max) {
  stages_.assign(static_cast<std::size_t>(horizon) + 1,
                 Eigen::MatrixXd::Zero(grid_max + 1, grid_max + 1));
}

Eigen::MatrixXd& ValueTable::stage(int k) {
  if (k < 1 || k > horizon_ + 1) {
    throw InternalError("ValueTable::stage: k=" + std::to_string(k) + " outside 1.." +
                        std::to_string(horizon_ + 1));
  }
  return stages_[static_cast<std::size_t>(k - 1)];
}

const Eigen::MatrixXd& ValueTable::stage(int k) const {
  return const_cast<ValueTable*>(this)->stage(k);
}

PolicyTable::PolicyTable(int horizon, int grid_max) : horizon_(horizon), grid_max_(grid_max) {
  stages_.assign(static_cast<std::size_t>(horizon),
                 Eigen::MatrixXi::Zero(grid_max + 1, grid_max + 1));
}

Eigen::MatrixXi& PolicyTable::stage(int k) {
  if (k < 1 || k > horizon_) {
    throw InternalError("PolicyTable::stage: k=" + std::to_string(k) + " outside 1.." +
                        std::to_string(horizon_));
  }
  return stages_[static_cast<std::size_t>(k - 1)];
}

const Eigen::MatrixXi& PolicyTable::stage(int k) const {
  return const_cast<PolicyTable*>(this)->stage(k);
}

double stage_cost(const LadderState& state, int action, const ProblemParams& params,
                  const CovarianceLadder& ladder) {
  if (state.n < 0 || state.n > ladder.depth() || state.n_e < 0 || state.n_e > ladder.depth()) {
    std::ostringstream os;
    os << "stage_cost: state (" << state.n << "," << state.n_e << ") outside ladder 0.."
       << ladder.depth();
    throw InternalError(os.str());
  }
  const double q = arrival_prob(action, params.channel);
  const double qe = eavesdrop_prob(action, params.channel);
  const double remote = q * ladder.trace(0) + (1.0 - q) * ladder.next_trace(state.n);
  const double eve = qe * ladder.trace(0) + (1.0 - qe) * ladder.next_trace(state.n_e);
  return action * params.enc_cost + params.beta * remote - (1.0 - params.beta) * eve;
}

namespace {

// Expected continuation under `action` from (n, n_e) against next stage
// values. Successor indices saturate at the grid edge.
double continuation(const Eigen::MatrixXd& next_values, const LadderState& state, int action,
                    const ChannelParams& ch, int grid_max) {
  const JointTransition t = joint_transition(action, ch);
  const int up_n = std::min(state.n + 1, grid_max);
  const int up_ne = std::min(state.n_e + 1, grid_max);
  return t.p00 * next_values(up_n, up_ne) + t.p01 * next_values(up_n, 0) +
         t.p10 * next_values(0, up_ne) + t.p11 * next_values(0, 0);
}

}  // namespace

FullInfoSolution backward_induction(const ProblemParams& params, const CovarianceLadder& ladder) {
  params.validate();
  const int N = params.horizon;
  const int D = ladder.depth();
  if (D < N + 1) {
    std::ostringstream os;
    os << "backward_induction: ladder depth " << D << " < horizon+1 = " << N + 1;
    throw ConfigError(os.str());
  }

  FullInfoSolution sol{ValueTable(N, D), PolicyTable(N, D)};
  for (int k = N; k >= 1; --k) {
    const Eigen::MatrixXd& next = sol.values.stage(k + 1);
    Eigen::MatrixXd& cur = sol.values.stage(k);
    Eigen::MatrixXi& act = sol.policy.stage(k);
    for (int n = 0; n <= D; ++n) {
      for (int ne = 0; ne <= D; ++ne) {
        const LadderState s{n, ne};
        const double q0 =
            stage_cost(s, 0, params, ladder) + continuation(next, s, 0, params.channel, D);
        const double q1 =
            stage_cost(s, 1, params, ladder) + continuation(next, s, 1, params.channel, D);
        if (q1 < q0) {
          cur(n, ne) = q1;
          act(n, ne) = 1;
        } else {
          cur(n, ne) = q0;
          act(n, ne) = 0;
        }
      }
    }
  }
  return sol;
}

double phi(int k, const LadderState& state, const ValueTable& values,
           const ProblemParams& params, const CovarianceLadder& ladder) {
  const Eigen::MatrixXd& next = values.stage(k + 1);
  const double q0 =
      stage_cost(state, 0, params, ladder) + continuation(next, state, 0, params.channel, values.grid_max());
  const double q1 =
      stage_cost(state, 1, params, ladder) + continuation(next, state, 1, params.channel, values.grid_max());
  return q1 - q0;
}

namespace {

// Shared prefix scan: returns the length of the leading run of ones and
// throws StructureViolation if a one follows a zero.
std::optional<int> leading_ones(const std::vector<int>& slice, const std::string& what) {
  int first_zero = -1;
  for (int i = 0; i < static_cast<int>(slice.size()); ++i) {
    if (slice[static_cast<std::size_t>(i)] == 0) {
      if (first_zero < 0) first_zero = i;
    } else if (first_zero >= 0) {
      std::ostringstream os;
      os << what << ": encrypt set is not contiguous (1 at position " << i
         << " after 0 at position " << first_zero << "; slice =";
      for (int v : slice) os << ' ' << v;
      os << ")";
      throw StructureViolation(os.str());
    }
  }
  if (first_zero == 0) return std::nullopt;
  if (first_zero < 0) return static_cast<int>(slice.size()) - 1;
  return first_zero - 1;
}

}  // namespace

std::optional<int> extract_threshold_m(int k, int n_e, const PolicyTable& policy) {
  const Eigen::MatrixXi& stage = policy.stage(k);
  if (n_e < 0 || n_e > policy.grid_max()) {
    throw InternalError("extract_threshold_m: n_e out of range");
  }
  std::vector<int> col(static_cast<std::size_t>(policy.grid_max()) + 1);
  for (int n = 0; n <= policy.grid_max(); ++n) col[static_cast<std::size_t>(n)] = stage(n, n_e);
  std::ostringstream what;
  what << "policy at k=" << k << ", n_e=" << n_e << " (scan over n)";
  return leading_ones(col, what.str());
}

std::optional<int> extract_threshold_me(int k, int n, const PolicyTable& policy) {
  const Eigen::MatrixXi& stage = policy.stage(k);
  if (n < 0 || n > policy.grid_max()) {
    throw InternalError("extract_threshold_me: n out of range");
  }
  // Reverse the row so a 1-suffix becomes a 1-prefix.
  const int D = policy.grid_max();
  std::vector<int> rev(static_cast<std::size_t>(D) + 1);
  for (int ne = 0; ne <= D; ++ne) rev[static_cast<std::size_t>(ne)] = stage(n, D - ne);
  std::ostringstream what;
  what << "policy at k=" << k << ", n=" << n << " (scan over n_e)";
  const std::optional<int> ones = leading_ones(rev, what.str());
  if (!ones) return std::nullopt;
  return D - *ones;
}

}  // namespace encsched
