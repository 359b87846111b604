#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "csv.hpp"
#include "encsched/errors.hpp"
#include "encsched/evaluation.hpp"

namespace encsched::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  return out;
}

std::filesystem::path prepare_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(out_dir + ": cannot create directory (" + ec.message() + ")");
  return dir;
}

void write_known_tables(const std::filesystem::path& dir, const FullInfoSolution& sol) {
  const int N = sol.policy.horizon();
  const int D = sol.policy.grid_max();

  std::vector<std::string> header{"n"};
  for (int ne = 0; ne <= D; ++ne) header.push_back("ne" + std::to_string(ne));

  for (int k = 1; k <= N; ++k) {
    auto values = open_output(dir / ("value_k" + std::to_string(k) + ".csv"));
    write_csv_row(values, header);
    for (int n = 0; n <= D; ++n) {
      std::vector<std::string> row{std::to_string(n)};
      for (int ne = 0; ne <= D; ++ne) row.push_back(fmt_number(sol.values.stage(k)(n, ne)));
      write_csv_row(values, row);
    }

    auto policy = open_output(dir / ("policy_k" + std::to_string(k) + ".csv"));
    write_csv_row(policy, header);
    for (int n = 0; n <= D; ++n) {
      std::vector<std::string> row{std::to_string(n)};
      for (int ne = 0; ne <= D; ++ne) row.push_back(std::to_string(sol.policy.stage(k)(n, ne)));
      write_csv_row(policy, row);
    }
  }

  auto thresholds = open_output(dir / "thresholds.csv");
  write_csv_row(thresholds, {"k", "n_e", "m"});
  for (int k = 1; k <= N; ++k) {
    for (int ne = 0; ne <= D; ++ne) {
      const std::optional<int> m = extract_threshold_m(k, ne, sol.policy);
      write_csv_row(thresholds,
                    {std::to_string(k), std::to_string(ne), m ? std::to_string(*m) : "none"});
    }
  }
}

std::string node_path(int depth, int local) {
  std::string path;
  for (int bit = depth - 1; bit >= 0; --bit) path += ((local >> bit) & 1) ? '1' : '0';
  return path;  // first action first; empty for the root
}

void write_unknown_tables(const std::filesystem::path& dir, const BeliefTree& tree,
                          const BeliefSolution& sol) {
  const int N = sol.policy.horizon();
  const int D = sol.policy.grid_max();

  std::vector<std::string> header{"node"};
  for (int n = 0; n <= D; ++n) header.push_back("n" + std::to_string(n));

  for (int k = 1; k <= N; ++k) {
    auto values = open_output(dir / ("value_k" + std::to_string(k) + ".csv"));
    write_csv_row(values, header);
    for (int j = 0; j < tree.level_size(k - 1); ++j) {
      std::vector<std::string> row{std::to_string(BeliefTree::node_id(k - 1, j))};
      for (int n = 0; n <= D; ++n) row.push_back(fmt_number(sol.values.stage(k)(j, n)));
      write_csv_row(values, row);
    }

    auto policy = open_output(dir / ("policy_k" + std::to_string(k) + ".csv"));
    write_csv_row(policy, header);
    for (int j = 0; j < tree.level_size(k - 1); ++j) {
      std::vector<std::string> row{std::to_string(BeliefTree::node_id(k - 1, j))};
      for (int n = 0; n <= D; ++n) row.push_back(std::to_string(sol.policy.stage(k)(j, n)));
      write_csv_row(policy, row);
    }
  }

  auto thresholds = open_output(dir / "thresholds.csv");
  write_csv_row(thresholds, {"k", "node", "m"});
  const BeliefThresholds certified = certify_belief_thresholds(sol.policy);
  for (int k = 1; k <= N; ++k) {
    const auto& level = certified.m[static_cast<std::size_t>(k - 1)];
    for (int j = 0; j < static_cast<int>(level.size()); ++j) {
      const auto& m = level[static_cast<std::size_t>(j)];
      write_csv_row(thresholds, {std::to_string(k), std::to_string(BeliefTree::node_id(k - 1, j)),
                                 m ? std::to_string(*m) : "none"});
    }
  }

  auto beliefs = open_output(dir / "beliefs.csv");
  std::vector<std::string> bheader{"id", "depth", "path"};
  for (int i = 0; i <= D; ++i) bheader.push_back("p" + std::to_string(i));
  write_csv_row(beliefs, bheader);
  for (int d = 0; d < tree.levels(); ++d) {
    for (int j = 0; j < tree.level_size(d); ++j) {
      const Belief& pi = tree.node(d, j);
      std::vector<std::string> row{std::to_string(BeliefTree::node_id(d, j)), std::to_string(d),
                                   node_path(d, j)};
      for (int i = 0; i < pi.size(); ++i) row.push_back(fmt_number(pi[i]));
      write_csv_row(beliefs, row);
    }
  }
}

}  // namespace

void cmd_solve(const RunConfig& config, SolveMode mode, const std::string& out_dir) {
  const std::filesystem::path dir = prepare_dir(out_dir);
  const CovarianceLadder ladder = ladder_for(config);
  if (mode == SolveMode::known) {
    write_known_tables(dir, backward_induction(config.params, ladder));
  } else {
    const BeliefTree tree =
        enumerate_belief_tree(config.params.channel, config.params.horizon, ladder.depth());
    write_unknown_tables(dir, tree, pomdp_backward_induction(config.params, ladder, tree));
  }
}

void cmd_grid(const RunConfig& config, int k, SolveMode mode, int node, std::ostream& out) {
  if (k < 1 || k > config.params.horizon) {
    std::ostringstream os;
    os << "k: must lie in 1.." << config.params.horizon << ", got " << k;
    throw ConfigError(os.str());
  }
  const CovarianceLadder ladder = ladder_for(config);
  const int D = ladder.depth();

  const auto label = [](int i) { return "h^" + std::to_string(i) + "(P*)"; };
  std::size_t label_width = label(D).size();

  if (mode == SolveMode::known) {
    const FullInfoSolution sol = backward_induction(config.params, ladder);
    const Eigen::MatrixXi& stage = sol.policy.stage(k);
    out << "# policy grid at k=" << k << ", mode=known ('#' = encrypt, '.' = plain)\n";
    out << "# rows: P_{k-1} = h^n(P*) for n = 0.." << D << ", top to bottom\n";
    out << "# cols: P_{e,k-1} = h^{n_e}(P*) for n_e = 0.." << D << ", left to right\n";
    for (int n = 0; n <= D; ++n) {
      std::string lbl = label(n);
      lbl.resize(label_width, ' ');
      out << lbl << " |";
      for (int ne = 0; ne <= D; ++ne) out << (stage(n, ne) == 1 ? '#' : '.');
      out << '\n';
    }
    out << '\n';
    std::vector<std::string> header{"n"};
    for (int ne = 0; ne <= D; ++ne) header.push_back("ne" + std::to_string(ne));
    write_csv_row(out, header);
    for (int n = 0; n <= D; ++n) {
      std::vector<std::string> row{std::to_string(n)};
      for (int ne = 0; ne <= D; ++ne) row.push_back(std::to_string(stage(n, ne)));
      write_csv_row(out, row);
    }
    return;
  }

  const BeliefTree tree =
      enumerate_belief_tree(config.params.channel, config.params.horizon, ladder.depth());
  const BeliefSolution sol = pomdp_backward_induction(config.params, ladder, tree);
  const Eigen::MatrixXi& stage = sol.policy.stage(k);

  std::vector<int> locals;
  if (node >= 0) {
    const long level_base = BeliefTree::node_id(k - 1, 0);
    const int local = static_cast<int>(node - level_base);
    if (local < 0 || local >= tree.level_size(k - 1)) {
      std::ostringstream os;
      os << "node: id " << node << " is not at depth " << k - 1 << " (valid ids "
         << level_base << ".." << level_base + tree.level_size(k - 1) - 1 << ")";
      throw ConfigError(os.str());
    }
    locals.push_back(local);
  } else {
    for (int j = 0; j < tree.level_size(k - 1); ++j) locals.push_back(j);
  }

  out << "# policy grid at k=" << k << ", mode=unknown ('#' = encrypt, '.' = plain)\n";
  out << "# rows: P_{k-1} = h^n(P*) for n = 0.." << D << ", top to bottom\n";
  out << "# cols: belief node ids";
  for (int j : locals) out << ' ' << BeliefTree::node_id(k - 1, j);
  out << ", left to right\n";
  for (int n = 0; n <= D; ++n) {
    std::string lbl = label(n);
    lbl.resize(label_width, ' ');
    out << lbl << " |";
    for (int j : locals) out << (stage(j, n) == 1 ? '#' : '.');
    out << '\n';
  }
  out << '\n';
  std::vector<std::string> header{"n"};
  for (int j : locals) header.push_back("node" + std::to_string(BeliefTree::node_id(k - 1, j)));
  write_csv_row(out, header);
  for (int n = 0; n <= D; ++n) {
    std::vector<std::string> row{std::to_string(n)};
    for (int j : locals) row.push_back(std::to_string(stage(j, n)));
    write_csv_row(out, row);
  }
}

namespace {

const std::vector<std::string> kReportHeader = {
    "strategy", "sum_remote_trace", "sum_eve_trace", "sum_encrypt", "J_mc",      "J_exact",
    "se_remote", "se_eve",          "se_encrypt",    "se_J",        "trials",    "seed"};

std::vector<std::string> report_row(const std::string& name, const SimReport& mc,
                                    const SimReport* exact) {
  return {name,
          fmt_number(mc.sum_remote_trace),
          fmt_number(mc.sum_eve_trace),
          fmt_number(mc.sum_encrypt),
          fmt_number(mc.total_cost),
          exact ? fmt_number(exact->total_cost) : "",
          fmt_number(mc.se_remote),
          fmt_number(mc.se_eve),
          fmt_number(mc.se_encrypt),
          fmt_number(mc.se_cost),
          std::to_string(mc.trials),
          std::to_string(mc.seed)};
}

}  // namespace

void cmd_compare(const RunConfig& config, long trials, std::uint64_t seed,
                 const std::string& out_dir) {
  const std::filesystem::path dir = prepare_dir(out_dir);
  const CovarianceLadder ladder = ladder_for(config);
  const std::vector<StrategyComparison> rows =
      compare_strategies(config.params, ladder, trials, seed);
  auto out = open_output(dir / "compare.csv");
  write_csv_row(out, kReportHeader);
  for (const StrategyComparison& row : rows) {
    write_csv_row(out, report_row(row.name, row.monte_carlo, &row.exact));
  }
}

void cmd_simulate(const RunConfig& config, const std::string& strategy_name, long trials,
                  std::uint64_t seed, std::ostream& out) {
  const CovarianceLadder ladder = ladder_for(config);

  Strategy strategy = Strategy::never();
  if (strategy_name == "never") {
    strategy = Strategy::never();
  } else if (strategy_name == "always") {
    strategy = Strategy::always();
  } else if (strategy_name == "optimal-known") {
    strategy = Strategy::optimal_known(backward_induction(config.params, ladder).policy);
  } else if (strategy_name == "optimal-unknown") {
    BeliefTree tree =
        enumerate_belief_tree(config.params.channel, config.params.horizon, ladder.depth());
    BeliefSolution sol = pomdp_backward_induction(config.params, ladder, tree);
    strategy = Strategy::optimal_unknown(std::move(sol.policy), std::move(tree));
  } else {
    throw ConfigError("strategy: expected never|always|optimal-known|optimal-unknown, got " +
                      strategy_name);
  }

  const SimReport mc = simulate(strategy, config.params, ladder, trials, seed);
  const SimReport exact = evaluate_policy_exact(strategy, config.params, ladder);
  write_csv_row(out, kReportHeader);
  write_csv_row(out, report_row(strategy.name(), mc, &exact));
}

void cmd_ladder(const RunConfig& config, int depth, std::ostream& out) {
  const CovarianceLadder ladder = ladder_for(config, depth);
  const int n = config.params.model.state_dim();
  std::vector<std::string> header{"index", "trace"};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      header.push_back("r" + std::to_string(i) + "c" + std::to_string(j));
    }
  }
  write_csv_row(out, header);
  for (int idx = 0; idx <= ladder.depth(); ++idx) {
    std::vector<std::string> row{std::to_string(idx), fmt_number(ladder.trace(idx))};
    const Eigen::MatrixXd& rung = ladder.rung(idx);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) row.push_back(fmt_number(rung(i, j)));
    }
    write_csv_row(out, row);
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Optimal encryption scheduling for remote state estimation "
               "against an eavesdropper"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mode_name = "known", strategy_name;
  int k = 1;
  int node = -1;
  int depth = -1;
  long trials = -1;
  std::int64_t seed = -1;

  CLI::App* solve = app.add_subcommand("solve", "Solve and dump value/policy/threshold tables");
  solve->add_option("--config", config_path, "JSON config path")->required();
  solve->add_option("--mode", mode_name, "known|unknown")
      ->check(CLI::IsMember({"known", "unknown"}))
      ->required();
  solve->add_option("--out", out_dir, "output directory")->required();

  CLI::App* grid = app.add_subcommand("grid", "Print one stage's policy as an ASCII grid + CSV");
  grid->add_option("--config", config_path, "JSON config path")->required();
  grid->add_option("--k", k, "stage index, 1..N")->required();
  grid->add_option("--mode", mode_name, "known|unknown")
      ->check(CLI::IsMember({"known", "unknown"}))
      ->required();
  grid->add_option("--node", node, "belief node id (unknown mode; default: all)");

  CLI::App* compare = app.add_subcommand("compare", "Evaluate the four standard strategies");
  compare->add_option("--config", config_path, "JSON config path")->required();
  compare->add_option("--trials", trials, "Monte Carlo trials (default: config)");
  compare->add_option("--seed", seed, "PRNG seed (default: config)");
  compare->add_option("--out", out_dir, "output directory")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo report for one strategy");
  simulate->add_option("--config", config_path, "JSON config path")->required();
  simulate->add_option("--strategy", strategy_name, "never|always|optimal-known|optimal-unknown")
      ->check(CLI::IsMember({"never", "always", "optimal-known", "optimal-unknown"}))
      ->required();
  simulate->add_option("--trials", trials, "Monte Carlo trials (default: config)");
  simulate->add_option("--seed", seed, "PRNG seed (default: config)");

  CLI::App* ladder = app.add_subcommand("ladder", "Print the covariance ladder as CSV");
  ladder->add_option("--config", config_path, "JSON config path")->required();
  ladder->add_option("--depth", depth, "ladder depth (default: config)");

  try {
    app.parse(argc, argv);

    const RunConfig config = load_config(config_path);
    const long run_trials = trials >= 0 ? trials : config.trials;
    const std::uint64_t run_seed =
        seed >= 0 ? static_cast<std::uint64_t>(seed) : config.seed;
    const SolveMode mode = mode_name == "known" ? SolveMode::known : SolveMode::unknown;

    if (solve->parsed()) {
      cmd_solve(config, mode, out_dir);
    } else if (grid->parsed()) {
      cmd_grid(config, k, mode, node, std::cout);
    } else if (compare->parsed()) {
      cmd_compare(config, run_trials, run_seed, out_dir);
    } else if (simulate->parsed()) {
      cmd_simulate(config, strategy_name, run_trials, run_seed, std::cout);
    } else if (ladder->parsed()) {
      cmd_ladder(config, depth >= 0 ? depth : config.ladder_depth, std::cout);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const StructureViolation& e) {
    std::cerr << "structure violation (threshold counterexample): " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(const std::vector<std::string>& argv) {
  std::vector<const char*> ptrs;
  ptrs.reserve(argv.size());
  for (const std::string& arg : argv) ptrs.push_back(arg.c_str());
  return run_cli(static_cast<int>(ptrs.size()), ptrs.data());
}

}  // namespace encsched::cli
