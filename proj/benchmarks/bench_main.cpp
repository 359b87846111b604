#include <benchmark/benchmark.h>

#include "encsched/evaluation.hpp"

using namespace encsched;

namespace {

SystemModel bench_model() {
  SystemModel model;
  model.A = Eigen::MatrixXd{{1.5, 0.0}, {0.0, 0.9}};
  model.C = Eigen::MatrixXd{{1.0, 0.0}};
  model.Q = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  model.R = Eigen::MatrixXd{{0.6}};
  model.Pi0 = Eigen::MatrixXd::Identity(2, 2);
  return model;
}

ProblemParams bench_params(int horizon) {
  ProblemParams params;
  params.model = bench_model();
  params.channel = ChannelParams{0.7, 0.7, 0.9, 0.18};
  params.beta = 0.5;
  params.enc_cost = 6.0;
  params.horizon = horizon;
  return params;
}

void BM_SteadyStateCovariance(benchmark::State& state) {
  const SystemModel model = bench_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(steady_state_covariance(model));
  }
}
BENCHMARK(BM_SteadyStateCovariance);

void BM_BuildLadder(benchmark::State& state) {
  const SystemModel model = bench_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_ladder(model, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_BuildLadder)->Arg(11)->Arg(21);

void BM_BackwardInduction(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  const ProblemParams params = bench_params(horizon);
  const CovarianceLadder ladder = build_ladder(params.model, horizon + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(backward_induction(params, ladder));
  }
}
BENCHMARK(BM_BackwardInduction)->Arg(6)->Arg(10)->Arg(20);

void BM_PomdpBackwardInduction(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  const ProblemParams params = bench_params(horizon);
  const CovarianceLadder ladder = build_ladder(params.model, horizon + 1);
  const BeliefTree tree = enumerate_belief_tree(params.channel, horizon, ladder.depth());
  for (auto _ : state) {
    benchmark::DoNotOptimize(pomdp_backward_induction(params, ladder, tree));
  }
}
BENCHMARK(BM_PomdpBackwardInduction)->Arg(6)->Arg(10)->Arg(14);

void BM_EvaluateExactBelief(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  const ProblemParams params = bench_params(horizon);
  const CovarianceLadder ladder = build_ladder(params.model, horizon + 1);
  BeliefTree tree = enumerate_belief_tree(params.channel, horizon, ladder.depth());
  BeliefSolution sol = pomdp_backward_induction(params, ladder, tree);
  const Strategy strategy = Strategy::optimal_unknown(std::move(sol.policy), std::move(tree));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_policy_exact(strategy, params, ladder));
  }
}
BENCHMARK(BM_EvaluateExactBelief)->Arg(6)->Arg(10);

void BM_Simulate(benchmark::State& state) {
  const ProblemParams params = bench_params(6);
  const CovarianceLadder ladder = build_ladder(params.model, 7);
  const Strategy strategy = Strategy::optimal_known(backward_induction(params, ladder).policy);
  const long trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(strategy, params, ladder, trials, 1));
  }
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(100000);

void BM_SimulateTrajectory(benchmark::State& state) {
  const ProblemParams params = bench_params(10);
  const CovarianceLadder ladder = build_ladder(params.model, 11);
  const Strategy strategy = Strategy::never();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_trajectory(params, strategy, ladder, seed++));
  }
}
BENCHMARK(BM_SimulateTrajectory);

}  // namespace

BENCHMARK_MAIN();
