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

#ifndef BOXTRAJ_SOLVER_FORWARD_PASS_HPP_
#define BOXTRAJ_SOLVER_FORWARD_PASS_HPP_

#include <optional>
#include <string>

#include "boxtraj/core/problem.hpp"
#include "boxtraj/solver/types.hpp"

namespace boxtraj {

struct ForwardPassResult {
  Trajectory trial;
  Gaps trial_gaps;
  double trial_cost = 0.0;
};

/**
 * Nonlinear rollout with gap contraction.
 *
 *   x0^ = x0 - (1 - a) f_0
 *   u_k^ = clamp(u_k + a k_k + K_k (x_k^ - x_k))
 *   x_{k+1}^ = f(x_k^, u_k^) - (1 - a) f_{k+1}
 *
 * so the gaps of the trial are exactly (1 - a) times the current ones. A full step from a
 * feasible iterate closes them. `clamp_bounds` is empty for variants that ignore bounds.
 */
inline ForwardPassResult forward_pass(const ShootingProblem& problem, const Trajectory& traj,
                                      const Policy& policy, const Gaps& gaps, double alpha,
                                      bool feasible,
                                      const std::optional<ControlBounds>& clamp_bounds) {
  const std::size_t N = problem.horizon();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("forward_pass: alpha must lie in [0, 1]");
  if (policy.horizon() != N || gaps.defects.size() != N + 1) {
    throw DimensionError("forward_pass: policy or gaps do not match the horizon");
  }
  problem.check_trajectory(traj);

  ForwardPassResult out;
  if (feasible && alpha == 1.0) {
    out.trial_gaps = Gaps::zeros_like(problem);
  } else {
    out.trial_gaps = gaps.scaled(1.0 - alpha);
  }
  const auto& residual = out.trial_gaps.defects;

  Trajectory& trial = out.trial;
  trial.states.resize(N + 1);
  trial.controls.resize(N);
  trial.states[0] = problem.initial_state() - residual[0];
  for (std::size_t k = 0; k < N; ++k) {
    VectorXd u = traj.controls[k] + alpha * policy.k[k] +
                 policy.K[k] * (trial.states[k] - traj.states[k]);
    if (clamp_bounds) u = clamp_bounds->clamp(u);
    const VectorXd next = problem.node(k).dynamics->calc(trial.states[k], u);
    if (!next.allFinite() || !u.allFinite()) {
      throw ForwardPassError("rollout diverged at node " + std::to_string(k));
    }
    trial.controls[k] = std::move(u);
    trial.states[k + 1] = next - residual[k + 1];
  }
  out.trial_cost = calc_cost(problem, trial);
  if (!std::isfinite(out.trial_cost)) throw ForwardPassError("trial cost is not finite");
  return out;
}

}  // namespace boxtraj

#endif  // BOXTRAJ_SOLVER_FORWARD_PASS_HPP_
