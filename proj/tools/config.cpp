#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "encsched/errors.hpp"
#include "json.hpp"

namespace encsched::cli {

namespace {

using nlohmann::json;

// nlohmann reports parse failures by byte offset; convert to line/column.
[[noreturn]] void rethrow_with_position(const std::string& text, const std::string& path,
                                        const json::parse_error& err) {
  std::size_t offset = err.byte > 0 ? err.byte - 1 : 0;
  offset = std::min(offset, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream os;
  os << path << ": parse error at line " << line << ", column " << column << ": " << err.what();
  throw ConfigError(os.str());
}

double get_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ConfigError(key + ": missing required field");
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key + ": expected a number");
  return v.get<double>();
}

long get_integer(const json& doc, const std::string& key, long fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
  return v.get<long>();
}

Eigen::MatrixXd get_matrix(const json& doc, const std::string& key, int rows, int cols) {
  if (!doc.contains(key)) throw ConfigError(key + ": missing required field");
  const json& v = doc.at(key);
  if (!v.is_array()) throw ConfigError(key + ": expected a row-major array of numbers");
  if (static_cast<int>(v.size()) != rows * cols) {
    std::ostringstream os;
    os << key << ": expected " << rows * cols << " entries (" << rows << "x" << cols
       << " row-major), got " << v.size();
    throw ConfigError(os.str());
  }
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const json& e = v.at(static_cast<std::size_t>(i * cols + j));
      if (!e.is_number()) {
        std::ostringstream os;
        os << key << "[" << i * cols + j << "]: expected a number";
        throw ConfigError(os.str());
      }
      M(i, j) = e.get<double>();
    }
  }
  return M;
}

const std::set<std::string> kKnownKeys = {
    "n",      "m",        "A",            "C",     "Q",      "R",
    "Pi0",    "lambda",   "lambda_e",     "eps1",  "eps2",   "enc_cost",
    "beta",   "horizon",  "ladder_depth", "seed",  "trials", "riccati_tol",
    "riccati_max_iter",
};

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    rethrow_with_position(text, path, err);
  }
  if (!doc.is_object()) throw ConfigError(path + ": top-level value must be an object");

  for (const auto& item : doc.items()) {
    if (!kKnownKeys.count(item.key())) {
      throw ConfigError(item.key() + ": unknown config key (typo?)");
    }
  }

  const long n = get_integer(doc, "n", -1);
  const long m = get_integer(doc, "m", -1);
  if (n < 1) throw ConfigError("n: must be an integer >= 1");
  if (m < 1) throw ConfigError("m: must be an integer >= 1");

  RunConfig config;
  SystemModel& model = config.params.model;
  const int ni = static_cast<int>(n), mi = static_cast<int>(m);
  model.A = get_matrix(doc, "A", ni, ni);
  model.C = get_matrix(doc, "C", mi, ni);
  model.Q = get_matrix(doc, "Q", ni, ni);
  model.R = get_matrix(doc, "R", mi, mi);
  model.Pi0 = get_matrix(doc, "Pi0", ni, ni);

  config.params.channel.lambda = get_number(doc, "lambda");
  config.params.channel.lambda_e = get_number(doc, "lambda_e");
  config.params.channel.eps1 = get_number(doc, "eps1");
  config.params.channel.eps2 = get_number(doc, "eps2");
  config.params.enc_cost = get_number(doc, "enc_cost");
  config.params.beta = get_number(doc, "beta");
  config.params.horizon = static_cast<int>(get_integer(doc, "horizon", 0));

  config.params.validate();

  config.ladder_depth =
      static_cast<int>(get_integer(doc, "ladder_depth", config.params.horizon + 1));
  if (config.ladder_depth < config.params.horizon + 1) {
    std::ostringstream os;
    os << "ladder_depth: must be >= horizon + 1 = " << config.params.horizon + 1 << ", got "
       << config.ladder_depth;
    throw ConfigError(os.str());
  }
  const long seed = get_integer(doc, "seed", 1);
  if (seed < 0) throw ConfigError("seed: must be >= 0");
  config.seed = static_cast<std::uint64_t>(seed);
  config.trials = get_integer(doc, "trials", 1000);
  if (config.trials < 1) throw ConfigError("trials: must be >= 1");
  if (doc.contains("riccati_tol")) {
    config.riccati_tol = get_number(doc, "riccati_tol");
    if (!(config.riccati_tol > 0)) throw ConfigError("riccati_tol: must be > 0");
  }
  config.riccati_max_iter = get_integer(doc, "riccati_max_iter", config.riccati_max_iter);
  if (config.riccati_max_iter < 1) throw ConfigError("riccati_max_iter: must be >= 1");
  return config;
}

CovarianceLadder ladder_for(const RunConfig& config) {
  return ladder_for(config, config.ladder_depth);
}

CovarianceLadder ladder_for(const RunConfig& config, int depth) {
  return build_ladder(config.params.model, depth, config.riccati_tol, config.riccati_max_iter);
}

}  // namespace encsched::cli
