#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "encsched/errors.hpp"

using namespace encsched;
using namespace encsched::cli;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("encsched_test_" + tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::string shipped_config(const std::string& name) {
  return std::string(ENCSCHED_CONFIG_DIR) + "/" + name;
}

// Reference parameters with selected fields overridable.
struct ConfigText {
  double beta = 0.5;
  double lambda = 0.7;
  double enc_cost = 6.0;
  int horizon = 6;
  std::string extra;

  std::string str() const {
    std::ostringstream os;
    os << "{\n"
       << "  \"n\": 2, \"m\": 1,\n"
       << "  \"A\": [1.5, 0.0, 0.0, 0.9],\n"
       << "  \"C\": [1.0, 0.0],\n"
       << "  \"Q\": [0.5, 0.0, 0.0, 0.5],\n"
       << "  \"R\": [0.6],\n"
       << "  \"Pi0\": [1.0, 0.0, 0.0, 1.0],\n"
       << "  \"lambda\": " << lambda << ", \"lambda_e\": 0.7,\n"
       << "  \"eps1\": 0.9, \"eps2\": 0.18,\n"
       << "  \"enc_cost\": " << enc_cost << ", \"beta\": " << beta << ",\n"
       << "  \"horizon\": " << horizon << extra << "\n}\n";
    return os.str();
  }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("shipped configs load and validate") {
  const RunConfig sec4 = load_config(shipped_config("paper_sec4.json"));
  CHECK(sec4.params.horizon == 10);
  CHECK(sec4.ladder_depth == 11);
  CHECK(sec4.params.channel.eps2 == doctest::Approx(0.18));

  const RunConfig table = load_config(shipped_config("paper_sec4_table.json"));
  CHECK(table.params.horizon == 6);
}

TEST_CASE("config validation failures carry the field path") {
  const fs::path dir = fresh_dir("cfg");

  SUBCASE("beta outside the open interval") {
    ConfigText cfg;
    cfg.beta = 1.0;
    const fs::path path = write_file(dir, "beta.json", cfg.str());
    CHECK_THROWS_WITH_AS(load_config(path.string()),
                         doctest::Contains("beta"), ConfigError);
  }
  SUBCASE("lambda above one") {
    ConfigText cfg;
    cfg.lambda = 1.2;
    const fs::path path = write_file(dir, "lambda.json", cfg.str());
    CHECK_THROWS_WITH_AS(load_config(path.string()),
                         doctest::Contains("lambda"), ConfigError);
  }
  SUBCASE("unknown keys are rejected") {
    ConfigText cfg;
    cfg.extra = ",\n  \"lamda\": 0.7";
    const fs::path path = write_file(dir, "typo.json", cfg.str());
    CHECK_THROWS_WITH_AS(load_config(path.string()),
                         doctest::Contains("lamda"), ConfigError);
  }
  SUBCASE("parse errors report line and column") {
    const fs::path path = write_file(dir, "broken.json", "{\n  \"n\": 2,\n  \"m\": oops\n}\n");
    CHECK_THROWS_WITH_AS(load_config(path.string()),
                         doctest::Contains("line 3"), ConfigError);
  }
  SUBCASE("ladder depth below horizon + 1") {
    ConfigText cfg;
    cfg.extra = ",\n  \"ladder_depth\": 3";
    const fs::path path = write_file(dir, "shallow.json", cfg.str());
    CHECK_THROWS_WITH_AS(load_config(path.string()),
                         doctest::Contains("ladder_depth"), ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config((dir / "nope.json").string()), ConfigError);
  }
}

TEST_CASE("solve writes one table per stage plus thresholds") {
  const fs::path dir = fresh_dir("solve");
  ConfigText cfg;
  cfg.horizon = 1;
  const fs::path path = write_file(dir, "h1.json", cfg.str());
  const fs::path out = dir / "out";
  cmd_solve(load_config(path.string()), SolveMode::known, out.string());

  CHECK(fs::exists(out / "policy_k1.csv"));
  CHECK(fs::exists(out / "value_k1.csv"));
  CHECK(fs::exists(out / "thresholds.csv"));
  CHECK(!fs::exists(out / "policy_k2.csv"));
  CHECK(!fs::exists(out / "beliefs.csv"));
}

TEST_CASE("solve in unknown mode also dumps the reachable beliefs") {
  const fs::path dir = fresh_dir("solveu");
  ConfigText cfg;
  cfg.horizon = 4;
  const fs::path path = write_file(dir, "h4.json", cfg.str());
  const fs::path out = dir / "out";
  cmd_solve(load_config(path.string()), SolveMode::unknown, out.string());

  CHECK(fs::exists(out / "beliefs.csv"));
  std::istringstream beliefs(slurp(out / "beliefs.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(beliefs, line)) ++rows;
  CHECK(rows == 1 + 15);  // header + 2^4 - 1 reachable beliefs

  // Root row: id 0, empty path, point mass at index 0.
  std::istringstream again(slurp(out / "beliefs.csv"));
  std::getline(again, line);
  std::getline(again, line);
  const std::vector<std::string> fields = split_fields(line);
  CHECK(fields[0] == "0");
  CHECK(fields[1] == "0");
  CHECK(fields[2] == "");
  CHECK(fields[3] == "1");
}

TEST_CASE("prohibitive cost: all-plain grids and empty thresholds") {
  const fs::path dir = fresh_dir("dominated");
  ConfigText cfg;
  cfg.enc_cost = 1e6;
  cfg.horizon = 3;
  const fs::path path = write_file(dir, "big.json", cfg.str());
  const fs::path out = dir / "out";
  const RunConfig config = load_config(path.string());
  cmd_solve(config, SolveMode::known, out.string());

  for (int k = 1; k <= 3; ++k) {
    std::istringstream policy(slurp(out / ("policy_k" + std::to_string(k) + ".csv")));
    std::string line;
    std::getline(policy, line);  // header
    while (std::getline(policy, line)) {
      const std::vector<std::string> fields = split_fields(line);
      for (std::size_t i = 1; i < fields.size(); ++i) CHECK(fields[i] == "0");
    }
  }
  std::istringstream thresholds(slurp(out / "thresholds.csv"));
  std::string line;
  std::getline(thresholds, line);
  while (std::getline(thresholds, line)) {
    CHECK(split_fields(line)[2] == "none");
  }

  // The ASCII grid agrees: everything plain.
  std::ostringstream grid;
  cmd_grid(config, 2, SolveMode::known, -1, grid);
  std::istringstream gs(grid.str());
  while (std::getline(gs, line)) {
    const std::size_t bar = line.find('|');
    if (bar != std::string::npos && line[0] != '#') {
      CHECK(line.find('#', bar) == std::string::npos);
    }
  }
}

TEST_CASE("grid characters agree cell-for-cell with the stage policy file") {
  const fs::path dir = fresh_dir("grid");
  ConfigText cfg;
  cfg.horizon = 5;
  const fs::path path = write_file(dir, "h5.json", cfg.str());
  const RunConfig config = load_config(path.string());

  const fs::path out = dir / "out";
  cmd_solve(config, SolveMode::known, out.string());
  std::ostringstream grid;
  cmd_grid(config, 3, SolveMode::known, -1, grid);

  // Collect the ASCII rows (the lines holding a '|').
  std::vector<std::string> ascii;
  std::istringstream gs(grid.str());
  std::string line;
  while (std::getline(gs, line)) {
    const std::size_t bar = line.find('|');
    if (bar != std::string::npos && line[0] != '#') ascii.push_back(line.substr(bar + 1));
  }

  std::istringstream policy(slurp(out / "policy_k3.csv"));
  std::getline(policy, line);  // header
  std::size_t row = 0;
  while (std::getline(policy, line)) {
    REQUIRE(row < ascii.size());
    const std::vector<std::string> fields = split_fields(line);
    REQUIRE(fields.size() == ascii[row].size() + 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      CHECK(ascii[row][i - 1] == (fields[i] == "1" ? '#' : '.'));
    }
    ++row;
  }
  CHECK(row == ascii.size());
}

TEST_CASE("grid on the reference instance shows the low-n / high-ne encrypt corner") {
  const RunConfig config = load_config(shipped_config("paper_sec4.json"));
  std::ostringstream grid;
  cmd_grid(config, 5, SolveMode::known, -1, grid);

  std::vector<std::string> ascii;
  std::istringstream gs(grid.str());
  std::string line;
  while (std::getline(gs, line)) {
    const std::size_t bar = line.find('|');
    if (bar != std::string::npos && line[0] != '#') ascii.push_back(line.substr(bar + 1));
  }
  REQUIRE(ascii.size() == 12);
  CHECK(ascii.front().back() == '#');  // small backlog, Eve far behind: encrypt
  CHECK(ascii.back().front() == '.');  // huge backlog, Eve reset: plain
}

TEST_CASE("grid rejects an out-of-range stage") {
  const RunConfig config = load_config(shipped_config("paper_sec4.json"));
  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_grid(config, 11, SolveMode::known, -1, sink), ConfigError);
  CHECK_THROWS_AS(cmd_grid(config, 0, SolveMode::known, -1, sink), ConfigError);
}

TEST_CASE("grid in unknown mode can slice a single belief node") {
  const fs::path dir = fresh_dir("gridu");
  ConfigText cfg;
  cfg.horizon = 4;
  const fs::path path = write_file(dir, "h4.json", cfg.str());
  const RunConfig config = load_config(path.string());

  std::ostringstream all;
  cmd_grid(config, 3, SolveMode::unknown, -1, all);
  CHECK(all.str().find("node3") != std::string::npos);

  std::ostringstream one;
  cmd_grid(config, 3, SolveMode::unknown, 4, one);  // depth-2 ids are 3..6
  CHECK(one.str().find("node4") != std::string::npos);
  CHECK(one.str().find("node3") == std::string::npos);

  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_grid(config, 3, SolveMode::unknown, 7, sink), ConfigError);
}

TEST_CASE("compare output is byte-identical across runs with a fixed seed") {
  const fs::path a = fresh_dir("cmpa");
  const fs::path b = fresh_dir("cmpb");
  const RunConfig config = load_config(shipped_config("paper_sec4_table.json"));
  cmd_compare(config, 200, 11, a.string());
  cmd_compare(config, 200, 11, b.string());
  const std::string file_a = slurp(a / "compare.csv");
  CHECK(!file_a.empty());
  CHECK(file_a == slurp(b / "compare.csv"));
}

TEST_CASE("emitted numbers are print-parse-print stable") {
  const fs::path dir = fresh_dir("roundtrip");
  const RunConfig config = load_config(shipped_config("paper_sec4_table.json"));
  cmd_compare(config, 300, 5, dir.string());

  std::istringstream file(slurp(dir / "compare.csv"));
  std::string line;
  std::getline(file, line);  // header
  int numeric_fields = 0;
  while (std::getline(file, line)) {
    for (const std::string& field : split_fields(line)) {
      if (field.empty()) continue;
      char* end = nullptr;
      const double value = std::strtod(field.c_str(), &end);
      if (end == field.c_str() + field.size()) {
        CHECK(fmt_number(value) == field);
        ++numeric_fields;
      }
    }
  }
  CHECK(numeric_fields > 30);
}

TEST_CASE("simulate prints a single-strategy report") {
  const RunConfig config = load_config(shipped_config("paper_sec4_table.json"));
  std::ostringstream out;
  cmd_simulate(config, "optimal-known", 500, 3, out);
  std::istringstream lines(out.str());
  std::string header, row;
  CHECK(std::getline(lines, header));
  CHECK(std::getline(lines, row));
  CHECK(header.rfind("strategy,", 0) == 0);
  CHECK(row.rfind("theta_star1,", 0) == 0);
}

TEST_CASE("exit codes: 0 success, 2 config, 3 numerical") {
  const fs::path dir = fresh_dir("exit");
  const std::string good = shipped_config("paper_sec4_table.json");

  CHECK(run_cli({"encsched", "ladder", "--config", good, "--depth", "4"}) == 0);
  CHECK(run_cli({"encsched", "ladder"}) == 2);  // missing required flag
  CHECK(run_cli({"encsched", "nonsense"}) == 2);

  ConfigText bad_cfg;
  bad_cfg.beta = 1.0;
  const fs::path bad = write_file(dir, "bad.json", bad_cfg.str());
  CHECK(run_cli({"encsched", "ladder", "--config", bad.string(), "--depth", "4"}) == 2);

  ConfigText slow_cfg;
  slow_cfg.extra = ",\n  \"riccati_max_iter\": 1";
  const fs::path slow = write_file(dir, "slow.json", slow_cfg.str());
  CHECK(run_cli({"encsched", "ladder", "--config", slow.string(), "--depth", "4"}) == 3);

  const fs::path out = dir / "out";
  CHECK(run_cli({"encsched", "compare", "--config", good, "--trials", "0", "--seed", "1",
                 "--out", out.string()}) == 2);
}

}  // TEST_SUITE
