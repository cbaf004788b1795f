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

#ifndef BOXTRAJ_CLI_REGISTRY_HPP_
#define BOXTRAJ_CLI_REGISTRY_HPP_

#include <string>
#include <vector>

#include "boxtraj/boxtraj.hpp"
#include "boxtraj/cli/config.hpp"

namespace boxtraj::cli {

inline ShootingProblem build_problem(const RunConfig& cfg) {
  if (cfg.problem == "lq") {
    std::optional<ControlBounds> bounds;
    if (std::isfinite(cfg.lq_bound)) bounds = ControlBounds::symmetric(1, cfg.lq_bound);
    return problems::make_lq_double_integrator(cfg.nodes.value_or(20), 0.1, bounds,
                                               (VectorXd(2) << 1.0, 0.0).finished());
  }
  if (cfg.problem == "pend") {
    return problems::make_double_pendulum({}, cfg.nodes.value_or(100), 1.0, cfg.pend_u_limit);
  }
  const std::size_t N = cfg.nodes.value_or(100);
  if (cfg.problem == "quad-goal") {
    return problems::make_planar_quadrotor({}, problems::quad_goal_task(N, cfg.quad_start_x), N);
  }
  if (cfg.problem == "quad-narrow") {
    return problems::make_planar_quadrotor({}, problems::quad_narrow_task(N, cfg.quad_start_x), N);
  }
  throw ConfigError("unknown problem '" + cfg.problem + "'");
}

/// Half-width of the initial-state sweep. A single configured value applies to the first coordinate.
inline VectorXd sweep_spread(const RunConfig& cfg, Index state_dim) {
  VectorXd spread = VectorXd::Zero(state_dim);
  if (cfg.spread.empty()) {
    spread[0] = (cfg.problem == "lq" || cfg.problem == "pend") ? 0.5 : 0.6;
  } else if (cfg.spread.size() == 1) {
    spread[0] = cfg.spread.front();
  } else if (static_cast<Index>(cfg.spread.size()) == state_dim) {
    for (Index i = 0; i < state_dim; ++i) spread[i] = cfg.spread[i];
  } else {
    throw ConfigError("spread needs 1 or " + std::to_string(state_dim) + " entries");
  }
  return spread;
}

/// Evenly spaced initial states in [x0 - spread, x0 + spread]; a single start is x0 itself.
inline std::vector<VectorXd> sweep_starts(const VectorXd& x0, const VectorXd& spread, int n) {
  std::vector<VectorXd> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : -1.0 + 2.0 * i / static_cast<double>(n - 1);
    out.push_back(x0 + t * spread);
  }
  return out;
}

/// Compare defaults: every variant the problem admits.
inline std::vector<std::string> default_variants(const ShootingProblem& p) {
  if (p.bounds() && p.bounds()->all_finite()) return variant_names();
  if (p.bounds()) return {"ddp", "fddp", "box-ddp", "box-fddp"};
  return {"ddp", "fddp"};
}

/// Solves with a named variant; "squash" runs the squashing baseline.
inline Solution run_variant(const ShootingProblem& p, const std::string& variant, const RunConfig& cfg) {
  if (variant == "squash") return problems::solve_squashed(p, cfg.beta, std::nullopt, cfg.settings).solution;
  return solve(p, variant_from_string(variant), std::nullopt, cfg.settings);
}

}  // namespace boxtraj::cli

#endif  // BOXTRAJ_CLI_REGISTRY_HPP_
