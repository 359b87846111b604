#include "encsched/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "encsched/errors.hpp"

namespace encsched {

Strategy Strategy::never() { return Strategy(StrategyKind::never); }

Strategy Strategy::always() { return Strategy(StrategyKind::always); }

Strategy Strategy::optimal_known(PolicyTable table) {
  Strategy s(StrategyKind::optimal_known);
  s.table_ = std::make_shared<const PolicyTable>(std::move(table));
  return s;
}

Strategy Strategy::optimal_unknown(BeliefPolicy policy, BeliefTree tree) {
  Strategy s(StrategyKind::optimal_unknown);
  s.belief_policy_ = std::make_shared<const BeliefPolicy>(std::move(policy));
  s.tree_ = std::make_shared<const BeliefTree>(std::move(tree));
  return s;
}

Strategy Strategy::explicit_table(PolicyTable table) {
  Strategy s(StrategyKind::explicit_table);
  s.table_ = std::make_shared<const PolicyTable>(std::move(table));
  return s;
}

const char* Strategy::name() const {
  switch (kind_) {
    case StrategyKind::never: return "theta1";
    case StrategyKind::always: return "theta2";
    case StrategyKind::optimal_known: return "theta_star1";
    case StrategyKind::optimal_unknown: return "theta_star2";
    case StrategyKind::explicit_table: return "explicit";
  }
  return "unknown";
}

void Strategy::check_horizon(int horizon) const {
  if (table_ && table_->horizon() != horizon) {
    std::ostringstream os;
    os << "strategy table covers horizon " << table_->horizon() << ", problem has " << horizon;
    throw ConfigError(os.str());
  }
  if (belief_policy_ && belief_policy_->horizon() != horizon) {
    std::ostringstream os;
    os << "belief policy covers horizon " << belief_policy_->horizon() << ", problem has "
       << horizon;
    throw ConfigError(os.str());
  }
}

int Strategy::action(int k, int n, int n_e) const {
  switch (kind_) {
    case StrategyKind::never: return 0;
    case StrategyKind::always: return 1;
    case StrategyKind::optimal_known:
    case StrategyKind::explicit_table: return table_->at(k, n, n_e);
    case StrategyKind::optimal_unknown:
      throw InternalError("belief strategy queried through the full-information accessor");
  }
  return 0;
}

int Strategy::action_belief(int k, int node, int n) const {
  switch (kind_) {
    case StrategyKind::never: return 0;
    case StrategyKind::always: return 1;
    case StrategyKind::optimal_unknown: return belief_policy_->at(k, node, n);
    case StrategyKind::optimal_known:
    case StrategyKind::explicit_table:
      throw InternalError("full-information strategy queried through the belief accessor");
  }
  return 0;
}

const BeliefTree& Strategy::tree() const {
  if (!tree_) throw InternalError("strategy carries no belief tree");
  return *tree_;
}

namespace {

void check_eval_inputs(const Strategy& strategy, const ProblemParams& params,
                       const CovarianceLadder& ladder) {
  params.validate();
  strategy.check_horizon(params.horizon);
  if (ladder.depth() < params.horizon + 1) {
    std::ostringstream os;
    os << "evaluation: ladder depth " << ladder.depth() << " < horizon+1 = "
       << params.horizon + 1;
    throw ConfigError(os.str());
  }
}

SimReport exact_full_info(const Strategy& strategy, const ProblemParams& params,
                          const CovarianceLadder& ladder) {
  const int N = params.horizon;
  const int D = ladder.depth();
  SimReport report;
  report.remote_trace_per_step.reserve(static_cast<std::size_t>(N));

  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(D + 1, D + 1);
  dist(0, 0) = 1.0;
  for (int k = 1; k <= N; ++k) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(D + 1, D + 1);
    double step_remote = 0.0;
    for (int n = 0; n <= D; ++n) {
      for (int ne = 0; ne <= D; ++ne) {
        const double p = dist(n, ne);
        if (p == 0.0) continue;
        const int a = strategy.action(k, n, ne);
        const double q = arrival_prob(a, params.channel);
        const double qe = eavesdrop_prob(a, params.channel);
        const double remote = q * ladder.trace(0) + (1.0 - q) * ladder.next_trace(n);
        const double eve = qe * ladder.trace(0) + (1.0 - qe) * ladder.next_trace(ne);
        step_remote += p * remote;
        report.sum_remote_trace += p * remote;
        report.sum_eve_trace += p * eve;
        report.sum_encrypt += p * a;
        report.total_cost +=
            p * (params.beta * remote - (1.0 - params.beta) * eve + a * params.enc_cost);
        const int up_n = std::min(n + 1, D);
        const int up_ne = std::min(ne + 1, D);
        next(up_n, up_ne) += p * (1.0 - q) * (1.0 - qe);
        next(up_n, 0) += p * (1.0 - q) * qe;
        next(0, up_ne) += p * q * (1.0 - qe);
        next(0, 0) += p * q * qe;
      }
    }
    report.remote_trace_per_step.push_back(step_remote);
    dist = std::move(next);
  }
  return report;
}

SimReport exact_belief(const Strategy& strategy, const ProblemParams& params,
                       const CovarianceLadder& ladder) {
  const int N = params.horizon;
  const int D = ladder.depth();
  const BeliefTree& tree = strategy.tree();
  if (tree.horizon() != N) {
    throw ConfigError("evaluation: belief tree horizon does not match the problem");
  }
  SimReport report;
  report.remote_trace_per_step.reserve(static_cast<std::size_t>(N));

  // Joint distribution over (belief node at depth k-1, remote index n);
  // Eve's index is conditionally distributed per the node's belief.
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(1, D + 1);
  dist(0, 0) = 1.0;
  for (int k = 1; k <= N; ++k) {
    const int next_rows = (k < N) ? tree.level_size(k) : 1;
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(next_rows, D + 1);
    double step_remote = 0.0;
    for (int j = 0; j < dist.rows(); ++j) {
      const Belief& pi = tree.node(k - 1, j);
      for (int n = 0; n <= D; ++n) {
        const double p = dist(j, n);
        if (p == 0.0) continue;
        const int a = strategy.action_belief(k, j, n);
        const double q = arrival_prob(a, params.channel);
        const Belief post = (k < N) ? tree.node(k, 2 * j + a) : belief_update(pi, a, params.channel);
        const double remote = q * ladder.trace(0) + (1.0 - q) * ladder.next_trace(n);
        const double eve = expected_eve_trace(post, ladder);
        step_remote += p * remote;
        report.sum_remote_trace += p * remote;
        report.sum_eve_trace += p * eve;
        report.sum_encrypt += p * a;
        report.total_cost +=
            p * (params.beta * remote - (1.0 - params.beta) * eve + a * params.enc_cost);
        const int child = (k < N) ? 2 * j + a : 0;
        next(child, 0) += p * q;
        next(child, std::min(n + 1, D)) += p * (1.0 - q);
      }
    }
    report.remote_trace_per_step.push_back(step_remote);
    dist = std::move(next);
  }
  return report;
}

}  // namespace

SimReport evaluate_policy_exact(const Strategy& strategy, const ProblemParams& params,
                                const CovarianceLadder& ladder) {
  check_eval_inputs(strategy, params, ladder);
  return strategy.uses_belief() ? exact_belief(strategy, params, ladder)
                                : exact_full_info(strategy, params, ladder);
}

SimReport simulate(const Strategy& strategy, const ProblemParams& params,
                   const CovarianceLadder& ladder, long trials, std::uint64_t seed) {
  check_eval_inputs(strategy, params, ladder);
  if (trials < 1) throw ConfigError("simulate: trials must be >= 1");

  const int N = params.horizon;
  const int D = ladder.depth();
  const double q[2] = {arrival_prob(0, params.channel), arrival_prob(1, params.channel)};
  const double qe[2] = {eavesdrop_prob(0, params.channel), eavesdrop_prob(1, params.channel)};

  // Welford accumulation: numerically stable and exactly zero variance
  // for constant per-trial sums.
  struct Accumulator {
    double mean = 0.0;
    double m2 = 0.0;
    long count = 0;
    void add(double x) {
      ++count;
      const double delta = x - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (x - mean);
    }
    double standard_error() const {
      if (count < 2) return 0.0;
      const double variance = m2 / static_cast<double>(count - 1);
      return std::sqrt(variance / static_cast<double>(count));
    }
  };
  Accumulator acc[4];
  for (long t = 0; t < trials; ++t) {
    SplitMix64 stream = SplitMix64::for_stream(seed, static_cast<std::uint64_t>(t));
    int n = 0, ne = 0, node = 0;
    double remote = 0.0, eve = 0.0, encrypts = 0.0;
    for (int k = 1; k <= N; ++k) {
      const int a = strategy.uses_belief() ? strategy.action_belief(k, node, n)
                                           : strategy.action(k, n, ne);
      const bool got = stream.bernoulli(q[a]);
      const bool spied = stream.bernoulli(qe[a]);
      n = got ? 0 : std::min(n + 1, D);
      ne = spied ? 0 : std::min(ne + 1, D);
      if (strategy.uses_belief() && k < N) node = 2 * node + a;
      remote += ladder.trace(n);
      eve += ladder.trace(ne);
      encrypts += a;
    }
    const double cost = params.beta * remote - (1.0 - params.beta) * eve +
                        params.enc_cost * encrypts;
    acc[0].add(remote);
    acc[1].add(eve);
    acc[2].add(encrypts);
    acc[3].add(cost);
  }

  SimReport report;
  report.trials = trials;
  report.seed = seed;
  report.sum_remote_trace = acc[0].mean;
  report.sum_eve_trace = acc[1].mean;
  report.sum_encrypt = acc[2].mean;
  report.total_cost = acc[3].mean;
  report.se_remote = acc[0].standard_error();
  report.se_eve = acc[1].standard_error();
  report.se_encrypt = acc[2].standard_error();
  report.se_cost = acc[3].standard_error();
  return report;
}

TrajectoryRecord simulate_trajectory(const ProblemParams& params, const Strategy& strategy,
                                     const CovarianceLadder& ladder, std::uint64_t seed) {
  check_eval_inputs(strategy, params, ladder);
  const SystemModel& model = params.model;
  const int nx = model.state_dim();
  const int ny = model.obs_dim();
  const int N = params.horizon;
  const int D = ladder.depth();

  const Eigen::MatrixXd gain = steady_state_gain(model, ladder.rung(0));
  const Eigen::MatrixXd sq_Q = psd_sqrt(model.Q);
  const Eigen::MatrixXd sq_R = psd_sqrt(model.R);
  const Eigen::MatrixXd sq_Pi0 = psd_sqrt(model.Pi0);
  const Eigen::MatrixXd sq_Pstar = psd_sqrt(ladder.rung(0));

  SplitMix64 stream(seed);
  const auto gaussian_vec = [&stream](int dim) {
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z(i) = stream.next_gaussian();
    return z;
  };

  TrajectoryRecord rec;
  Eigen::VectorXd x = sq_Pi0 * gaussian_vec(nx);
  Eigen::VectorXd local = x - sq_Pstar * gaussian_vec(nx);  // steady-state filter error
  Eigen::VectorXd remote = local;
  Eigen::VectorXd eve = local;
  int n = 0, ne = 0, node = 0;

  rec.state.push_back(x);
  rec.local_estimate.push_back(local);
  rec.remote_estimate.push_back(remote);
  rec.eve_estimate.push_back(eve);
  rec.remote_index.push_back(n);
  rec.eve_index.push_back(ne);

  for (int k = 1; k <= N; ++k) {
    x = model.A * x + sq_Q * gaussian_vec(nx);
    const Eigen::VectorXd y = model.C * x + sq_R * gaussian_vec(ny);
    const Eigen::VectorXd predicted = model.A * local;
    local = predicted + gain * (y - model.C * predicted);

    const int a = strategy.uses_belief() ? strategy.action_belief(k, node, n)
                                         : strategy.action(k, n, ne);
    const double q = arrival_prob(a, params.channel);
    const double qe = eavesdrop_prob(a, params.channel);
    const bool got = stream.bernoulli(q);
    const bool spied = stream.bernoulli(qe);
    if (strategy.uses_belief() && k < N) node = 2 * node + a;

    if (got) {
      remote = local;
      n = 0;
    } else {
      remote = model.A * remote;
      n = std::min(n + 1, D);
    }
    if (spied) {
      eve = local;
      ne = 0;
    } else {
      eve = model.A * eve;
      ne = std::min(ne + 1, D);
    }

    rec.state.push_back(x);
    rec.measurement.push_back(y);
    rec.local_estimate.push_back(local);
    rec.remote_estimate.push_back(remote);
    rec.eve_estimate.push_back(eve);
    rec.action.push_back(a);
    rec.received.push_back(got ? 1 : 0);
    rec.intercepted.push_back(spied ? 1 : 0);
    rec.remote_index.push_back(n);
    rec.eve_index.push_back(ne);
  }
  return rec;
}

std::vector<StrategyComparison> compare_strategies(const ProblemParams& params,
                                                   const CovarianceLadder& ladder, long trials,
                                                   std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw ConfigError("compare_strategies: trials must be >= 1");

  FullInfoSolution full = backward_induction(params, ladder);
  BeliefTree tree = enumerate_belief_tree(params.channel, params.horizon, ladder.depth());
  BeliefSolution belief = pomdp_backward_induction(params, ladder, tree);

  const Strategy strategies[4] = {
      Strategy::never(),
      Strategy::always(),
      Strategy::optimal_known(std::move(full.policy)),
      Strategy::optimal_unknown(std::move(belief.policy), std::move(tree)),
  };

  std::vector<StrategyComparison> rows;
  rows.reserve(4);
  for (const Strategy& s : strategies) {
    StrategyComparison row;
    row.name = s.name();
    row.monte_carlo = simulate(s, params, ladder, trials, seed);
    row.exact = evaluate_policy_exact(s, params, ladder);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace encsched
