/*
 Copyright 2026 The boxtraj Authors

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

#ifndef BOXTRAJ_CLI_CONFIG_HPP_
#define BOXTRAJ_CLI_CONFIG_HPP_

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "boxtraj/core/errors.hpp"
#include "boxtraj/solver/types.hpp"

namespace boxtraj::cli {

inline const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"lq", "pend", "quad-goal", "quad-narrow"};
  return names;
}

inline const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names{"ddp", "fddp", "box-ddp", "box-fddp", "squash"};
  return names;
}

/// Everything a subcommand needs. Unset optionals fall back to per-problem defaults.
struct RunConfig {
  std::string problem = "lq";
  std::string variant = "box-fddp";
  std::vector<std::string> variants;  // compare / sweep-init; empty picks defaults
  int seed = 0;
  std::string out_dir = ".";
  SolverSettings settings{};
  double beta = 2.0;

  std::optional<int> nodes;
  double lq_bound = kInf;       // symmetric control limit of the lq problem
  double pend_u_limit = 5.0;
  double quad_start_x = -0.3;

  int n_starts = 10;
  std::vector<double> spread;  // empty picks the problem default

  void validate() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "inf" || v == "+inf") return kInf;
  if (v == "-inf") return -kInf;
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

inline int parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Applies one key=value pair. Unknown keys are configuration errors.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  SolverSettings& s = cfg.settings;
  if (key == "problem") cfg.problem = detail::trim(value);
  else if (key == "variant") cfg.variant = detail::trim(value);
  else if (key == "variants") cfg.variants = detail::split_list(value);
  else if (key == "seed") cfg.seed = parse_int(key, value);
  else if (key == "out_dir") cfg.out_dir = detail::trim(value);
  else if (key == "beta") cfg.beta = parse_double(key, value);
  else if (key == "nodes") cfg.nodes = parse_int(key, value);
  else if (key == "lq_bound") cfg.lq_bound = parse_double(key, value);
  else if (key == "pend_u_limit") cfg.pend_u_limit = parse_double(key, value);
  else if (key == "quad_start_x") cfg.quad_start_x = parse_double(key, value);
  else if (key == "n_starts") cfg.n_starts = parse_int(key, value);
  else if (key == "spread") {
    cfg.spread.clear();
    for (const auto& item : detail::split_list(value)) cfg.spread.push_back(parse_double(key, item));
  }
  else if (key == "max_iter") s.max_iter = parse_int(key, value);
  else if (key == "reg_init") s.reg_init = parse_double(key, value);
  else if (key == "reg_factor") s.reg_factor = parse_double(key, value);
  else if (key == "reg_min") s.reg_min = parse_double(key, value);
  else if (key == "reg_max") s.reg_max = parse_double(key, value);
  else if (key == "alpha_halvings") s.alpha_halvings = parse_int(key, value);
  else if (key == "alpha_big_step") s.alpha_big_step = parse_double(key, value);
  else if (key == "goldstein_lo") s.goldstein_lo = parse_double(key, value);
  else if (key == "goldstein_hi_ascent") s.goldstein_hi_ascent = parse_double(key, value);
  else if (key == "stop_tol") s.stop_tol = parse_double(key, value);
  else if (key == "gap_tol") s.gap_tol = parse_double(key, value);
  else if (key == "boxqp_max_iter") s.boxqp.max_iter = parse_int(key, value);
  else if (key == "boxqp_grad_tol") s.boxqp.grad_tol = parse_double(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

/// Flat `key = value` text; '#' starts a comment, blank lines are ignored.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    out[key] = detail::trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  for (const auto& [k, v] : parse_key_values(in)) apply_setting(cfg, k, v);
}

inline void RunConfig::validate() const {
  auto known = [](const std::vector<std::string>& set, const std::string& name) {
    for (const auto& s : set)
      if (s == name) return true;
    return false;
  };
  if (!known(problem_names(), problem)) throw ConfigError("unknown problem '" + problem + "'");
  if (!known(variant_names(), variant)) throw ConfigError("unknown variant '" + variant + "'");
  for (const auto& v : variants) {
    if (!known(variant_names(), v)) throw ConfigError("unknown variant '" + v + "'");
  }
  if (nodes && *nodes < 1) throw ConfigError("nodes must be at least 1");
  if (n_starts < 1) throw ConfigError("n_starts must be at least 1");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  for (double s : spread) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("spread entries must be finite and non-negative");
  }
  settings.validate();
}

}  // namespace boxtraj::cli

#endif  // BOXTRAJ_CLI_CONFIG_HPP_
