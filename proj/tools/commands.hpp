#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace encsched::cli {

enum class SolveMode { known, unknown };

// Solves the scheduling problem and writes value_k{K}.csv and
// policy_k{K}.csv per stage plus thresholds.csv; unknown mode adds
// beliefs.csv (one row per reachable belief node).
void cmd_solve(const RunConfig& config, SolveMode mode, const std::string& out_dir);

// Prints the stage-k policy as an ASCII grid ('#' = encrypt, '.' = plain)
// followed by the same grid as CSV. node < 0 means all belief nodes.
void cmd_grid(const RunConfig& config, int k, SolveMode mode, int node, std::ostream& out);

// Evaluates the four standard strategies, Monte Carlo and exactly, and
// writes compare.csv.
void cmd_compare(const RunConfig& config, long trials, std::uint64_t seed,
                 const std::string& out_dir);

// Monte Carlo report for one strategy, printed as CSV on stdout.
void cmd_simulate(const RunConfig& config, const std::string& strategy_name, long trials,
                  std::uint64_t seed, std::ostream& out);

// Prints the covariance ladder (index, trace, rung entries) as CSV.
void cmd_ladder(const RunConfig& config, int depth, std::ostream& out);

// Full command dispatch. Exit codes: 0 success, 2 configuration error,
// 3 numerical error, 4 structure violation (threshold counterexample),
// 1 anything else.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& argv);

}  // namespace encsched::cli
