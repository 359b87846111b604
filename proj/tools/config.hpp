#pragma once

#include <cstdint>
#include <string>

#include "encsched/mdp_full_info.hpp"

namespace encsched::cli {

// Fully validated run configuration. Matrices come from the file as
// row-major arrays with explicit dimensions; nothing is inferred from
// nesting depth.
struct RunConfig {
  ProblemParams params;
  int ladder_depth = 0;  // defaults to horizon + 1
  std::uint64_t seed = 1;
  long trials = 1000;
  double riccati_tol = 1e-12;
  long riccati_max_iter = 1000000;
};

// Loads and validates a JSON config. Parse errors carry line/column;
// validation errors carry the field path. Unknown keys are rejected.
RunConfig load_config(const std::string& path);

CovarianceLadder ladder_for(const RunConfig& config);
CovarianceLadder ladder_for(const RunConfig& config, int depth);

}  // namespace encsched::cli
