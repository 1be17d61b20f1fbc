/*
 Copyright 2026 The rhgc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "rhgc/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace rhgc {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& where, const std::string& why) {
  throw Error(ErrorKind::ConfigError, where + ": " + why);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) config_error(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) config_error(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(where + "." + key, e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const std::string& key, const std::string& where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

void read_range(const json& obj, const std::string& key, const std::string& where, double& lo,
                double& hi) {
  if (!obj.contains(key)) return;
  const auto r = get<std::vector<double>>(obj, key, where);
  if (r.size() != 2 || !(r[0] <= r[1])) config_error(where + "." + key, "expected [lo, hi]");
  lo = r[0];
  hi = r[1];
}

/// [a, b, ...] or {"from": a, "to": b}
std::vector<int> int_list(const json& v, const std::string& where) {
  if (v.is_object()) {
    reject_unknown(v, where, {"from", "to"});
    const int a = get<int>(v, "from", where);
    const int b = get<int>(v, "to", where);
    if (b < a) config_error(where, "empty range");
    std::vector<int> out;
    for (int i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  try {
    return v.get<std::vector<int>>();
  } catch (const json::exception& e) {
    config_error(where, e.what());
  }
}

/// [s, ...] or {"from": s, "count": k}
std::vector<std::uint64_t> seed_list(const json& v, const std::string& where) {
  if (v.is_object()) {
    reject_unknown(v, where, {"from", "count"});
    const auto a = get<std::uint64_t>(v, "from", where);
    const int k = get<int>(v, "count", where);
    if (k < 1) config_error(where, "count must be positive");
    std::vector<std::uint64_t> out;
    for (int i = 0; i < k; ++i) out.push_back(a + static_cast<std::uint64_t>(i));
    return out;
  }
  try {
    return v.get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    config_error(where, e.what());
  }
}

Matrix matrix_from_json(const json& v, const std::string& where) {
  std::vector<std::vector<double>> rows;
  try {
    rows = v.get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    config_error(where, e.what());
  }
  if (rows.empty() || rows.front().empty()) config_error(where, "empty matrix");
  Matrix M(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) config_error(where, "ragged rows");
    for (size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  fs::path p(path);
  if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
  return p.string();
}

}  // namespace

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open matrix file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, path + ": not a number '" + tok + "'");
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ConfigError, path + ": rows differ in length");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ConfigError, path + ": empty matrix");
  Matrix M(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

void write_matrix(std::ostream& os, const Matrix& M) {
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? " " : "") << M(i, j);
    os << '\n';
  }
  os.precision(old);
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    config_error("config", e.what());
  }
  reject_unknown(root, "config",
                 {"N", "W", "seeds", "algorithms", "submpc_iterations", "record_wall_time",
                  "output", "system", "costs", "lower_bound", "robot"});

  ExperimentConfig cfg;
  read_opt(root, "N", "config", cfg.N);
  if (cfg.N < 1) config_error("config.N", "must be at least 1");
  if (root.contains("W")) {
    cfg.W = int_list(root["W"], "config.W");
    if (cfg.W.empty()) config_error("config.W", "empty W list");
  }
  for (int w : cfg.W) {
    if (w < 1) config_error("config.W", "windows must be at least 1");
  }
  if (root.contains("seeds")) {
    cfg.seeds = seed_list(root["seeds"], "config.seeds");
    if (cfg.seeds.empty()) config_error("config.seeds", "empty seed list");
  }
  read_opt(root, "algorithms", "config", cfg.algorithms);
  for (const auto& a : cfg.algorithms) {
    if (a != "foss" && a != "rhgd" && a != "rhag" && a != "rhtm" && a != "submpc") {
      config_error("config.algorithms", "unknown algorithm '" + a + "'");
    }
  }
  if (root.contains("submpc_iterations")) {
    cfg.submpc_iterations = int_list(root["submpc_iterations"], "config.submpc_iterations");
  }
  for (int it : cfg.submpc_iterations) {
    if (it < 1) config_error("config.submpc_iterations", "must be at least 1");
  }
  read_opt(root, "record_wall_time", "config", cfg.record_wall_time);
  read_opt(root, "output", "config", cfg.output);
  if (!cfg.output.empty()) cfg.output = resolve(cfg.output, base_dir);

  if (root.contains("system")) {
    const json& s = root["system"];
    const std::string where = "config.system";
    reject_unknown(s, where, {"source", "A", "B", "A_file", "B_file", "n", "m"});
    read_opt(s, "source", where, cfg.system.source);
    read_opt(s, "n", where, cfg.system.n);
    read_opt(s, "m", where, cfg.system.m);
    if (cfg.system.source == "explicit") {
      for (const char* name : {"A", "B"}) {
        const std::string key(name);
        Matrix M;
        if (s.contains(key) && s.contains(key + "_file")) {
          config_error(where, "give either " + key + " or " + key + "_file");
        } else if (s.contains(key)) {
          M = matrix_from_json(s[key], where + "." + key);
        } else if (s.contains(key + "_file")) {
          const std::string path = resolve(get<std::string>(s, key + "_file", where), base_dir);
          if (!fs::exists(path)) config_error(where + "." + key + "_file", "missing file " + path);
          M = read_matrix(path);
        } else {
          config_error(where, "explicit source needs " + key);
        }
        (key == "A" ? cfg.system.A : cfg.system.B) = std::move(M);
      }
      try {
        LtiSystem{cfg.system.A, cfg.system.B}.validate();
      } catch (const Error& e) {
        config_error(where, e.what());
      }
    } else if (cfg.system.source == "random") {
      if (cfg.system.n < 1 || cfg.system.m < 1 || cfg.system.m > cfg.system.n) {
        config_error(where, "random source needs 1 <= m <= n");
      }
    } else if (cfg.system.source != "lower-bound") {
      config_error(where + ".source", "expected explicit, random or lower-bound");
    }
  } else {
    const CanonicalSystem ex = example_system();
    cfg.system.A = ex.A;
    cfg.system.B = ex.B;
  }

  if (root.contains("costs")) {
    const json& c = root["costs"];
    const std::string where = "config.costs";
    reject_unknown(c, where, {"Q_range", "R_range", "theta_range", "time_invariant", "terminal"});
    read_range(c, "Q_range", where, cfg.costs.q_lo, cfg.costs.q_hi);
    read_range(c, "R_range", where, cfg.costs.r_lo, cfg.costs.r_hi);
    read_range(c, "theta_range", where, cfg.costs.theta_lo, cfg.costs.theta_hi);
    read_opt(c, "time_invariant", where, cfg.costs.time_invariant);
    read_opt(c, "terminal", where, cfg.costs.terminal);
    if (!(cfg.costs.q_lo > 0.0) || !(cfg.costs.r_lo > 0.0)) {
      config_error(where, "weights must be positive");
    }
    if (cfg.costs.terminal != "stage" && cfg.costs.terminal != "bias") {
      config_error(where + ".terminal", "expected stage or bias");
    }
    if (cfg.costs.terminal == "bias" && !cfg.costs.time_invariant) {
      config_error(where + ".terminal", "bias terminal needs time_invariant costs");
    }
  }

  if (root.contains("lower_bound")) {
    const json& l = root["lower_bound"];
    const std::string where = "config.lower_bound";
    reject_unknown(l, where, {"zeta", "p", "L_N", "theta_bar"});
    read_opt(l, "zeta", where, cfg.lower_bound.zeta);
    read_opt(l, "p", where, cfg.lower_bound.p);
    read_opt(l, "L_N", where, cfg.lower_bound.L_N);
    read_opt(l, "theta_bar", where, cfg.lower_bound.theta_bar);
  }

  if (root.contains("robot")) {
    const json& r = root["robot"];
    const std::string where = "config.robot";
    reject_unknown(r, where,
                   {"N", "dt", "sim_dt", "reference", "time_scale", "line_speed", "circle_radius",
                    "tracking", "velocity", "turn_rate", "init", "safety_factor",
                    "power_iterations", "W", "algorithm"});
    RobotConfig& rc = cfg.robot;
    read_opt(r, "N", where, rc.N);
    read_opt(r, "dt", where, rc.dt);
    read_opt(r, "sim_dt", where, rc.sim_dt);
    read_opt(r, "reference", where, rc.reference);
    read_opt(r, "time_scale", where, rc.time_scale);
    read_opt(r, "line_speed", where, rc.line_speed);
    read_opt(r, "circle_radius", where, rc.circle_radius);
    read_opt(r, "tracking", where, rc.tracking);
    read_opt(r, "velocity", where, rc.velocity);
    read_opt(r, "turn_rate", where, rc.turn_rate);
    read_opt(r, "init", where, rc.init);
    read_opt(r, "safety_factor", where, rc.safety_factor);
    read_opt(r, "power_iterations", where, rc.power_iterations);
    if (r.contains("W")) cfg.robot_W = int_list(r["W"], where + ".W");
    read_opt(r, "algorithm", where, cfg.robot_algorithm);
    if (rc.N < 2 || !(rc.dt > 0.0) || !(rc.sim_dt > 0.0)) {
      config_error(where, "need N >= 2 and positive dt, sim_dt");
    }
    if (rc.reference != "heart" && rc.reference != "line" && rc.reference != "circle") {
      config_error(where + ".reference", "expected heart, line or circle");
    }
    if (rc.init != "extrapolate" && rc.init != "steady-state" && rc.init != "hold") {
      config_error(where + ".init", "expected extrapolate, steady-state or hold");
    }
    if (cfg.robot_algorithm != "rhgd" && cfg.robot_algorithm != "rhag" &&
        cfg.robot_algorithm != "rhtm") {
      config_error(where + ".algorithm", "expected rhgd, rhag or rhtm");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), fs::path(path).parent_path().string());
  } catch (const Error& e) {
    std::string msg = e.what();
    const std::string prefix = "ConfigError: ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw Error(ErrorKind::ConfigError, path + ": " + msg);
  }
}

}  // namespace rhgc
