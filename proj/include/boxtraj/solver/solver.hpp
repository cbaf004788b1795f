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

#ifndef BOXTRAJ_SOLVER_SOLVER_HPP_
#define BOXTRAJ_SOLVER_SOLVER_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "boxtraj/core/problem.hpp"
#include "boxtraj/solver/backward_pass.hpp"
#include "boxtraj/solver/forward_pass.hpp"
#include "boxtraj/solver/line_search.hpp"
#include "boxtraj/solver/types.hpp"

namespace boxtraj {

/// Accepted step, reported to SolverObserver::on_accept.
struct StepEvent {
  int iter = 0;
  double alpha = 0.0;
  bool was_feasible = false;       // mode the direction was computed in
  bool control_bounded = false;    // direction came from the box QP
  const Gaps* previous_gaps = nullptr;
  const Gaps* new_gaps = nullptr;  // recomputed from the accepted trajectory
  const Trajectory* trajectory = nullptr;
};

/// Optional hooks for diagnostics and invariant checks.
struct SolverObserver {
  std::function<void(const Trajectory& trial, double alpha)> on_trial;
  std::function<void(const StepEvent&)> on_accept;
};

/**
 * DDP solver family over a ShootingProblem.
 *
 * Ddp and BoxDdp close the gaps with an initial rollout and stay feasible. Fddp and BoxFddp
 * start in feasibility-driven mode (gaps open, unbounded direction) and switch to the
 * control-bounded direction once the iterate is feasible. Bounded variants clamp every
 * control of the rollout onto the box.
 */
class Solver {
 public:
  Solver(const ShootingProblem& problem, SolverVariant variant, SolverSettings settings = {})
      : problem_(problem), variant_(variant), settings_(std::move(settings)) {
    settings_.validate();
    if (is_bounded(variant_) && !problem_.bounds()) {
      throw ConfigError("bounded solver variants require control bounds");
    }
    if (is_bounded(variant_)) clamp_bounds_ = problem_.bounds();
  }

  void set_observer(SolverObserver observer) { observer_ = std::move(observer); }

  Solution solve(const std::optional<Trajectory>& init = std::nullopt) {
    Trajectory traj = init ? *init : cold_start(problem_);
    problem_.check_trajectory(traj);
    if (clamp_bounds_) {
      for (auto& u : traj.controls) u = clamp_bounds_->clamp(u);
    }

    const Gaps zero_gaps = Gaps::zeros_like(problem_);
    Gaps gaps;
    bool feasible = false;
    if (is_single_shooting(variant_)) {
      traj = rollout(problem_, traj.controls);
      gaps = zero_gaps;
      feasible = true;
    } else {
      gaps = compute_gaps(problem_, traj);
    }

    Solution sol;
    double cost = calc_cost(problem_, traj);
    double reg = settings_.reg_init;
    std::optional<Policy> previous_policy;

    for (int pass = 0; pass < settings_.max_iter; ++pass) {
      std::vector<NodeDiff> diffs = calc_diff(problem_, traj);
      const Gaps& active_gaps = feasible ? zero_gaps : gaps;

      std::optional<BackwardPassResult> bp;
      while (!bp) {
        try {
          bp = backward_pass(diffs, active_gaps, clamp_bounds_, traj, feasible, reg,
                             previous_policy ? &*previous_policy : nullptr, settings_.boxqp);
        } catch (const BackwardPassError&) {
          if (reg >= settings_.reg_max) break;
          reg = std::min(reg * settings_.reg_factor, settings_.reg_max);
        }
      }
      if (!bp) break;

      if (feasible && std::abs(bp->direction.at(1.0)) < settings_.stop_tol) {
        sol.converged = true;
        break;
      }

      std::optional<ForwardPassResult> step;
      double alpha = 1.0;
      double expected = 0.0;
      for (int i = 0; i <= settings_.alpha_halvings; ++i, alpha *= 0.5) {
        ForwardPassResult fp;
        try {
          fp = forward_pass(problem_, traj, bp->policy, active_gaps, alpha, feasible, clamp_bounds_);
        } catch (const ForwardPassError&) {
          continue;
        }
        if (observer_.on_trial) observer_.on_trial(fp.trial, alpha);
        expected = expected_improvement(bp->direction, active_gaps, diffs, traj, fp.trial, alpha);
        if (accept_step(expected, fp.trial_cost - cost, settings_)) {
          step = std::move(fp);
          break;
        }
      }

      if (!step) {
        if (reg >= settings_.reg_max) break;
        reg = std::min(reg * settings_.reg_factor, settings_.reg_max);
        continue;
      }

      const Gaps previous_gaps = active_gaps;
      const bool was_feasible = feasible;
      const double actual = step->trial_cost - cost;
      traj = std::move(step->trial);
      cost = step->trial_cost;
      if (is_single_shooting(variant_)) {
        gaps = zero_gaps;
        feasible = true;
      } else {
        gaps = compute_gaps(problem_, traj);
        feasible = gaps.inf_norm < settings_.gap_tol;
      }
      if (alpha >= settings_.alpha_big_step) {
        reg = std::max(reg / settings_.reg_factor, settings_.reg_min);
      }
      previous_policy = std::move(bp->policy);

      IterationRecord rec;
      rec.iter = static_cast<int>(sol.log.size()) + 1;
      rec.cost = cost;
      rec.gap_inf_norm = gaps.inf_norm;
      rec.step_length = alpha;
      rec.regularization = reg;
      rec.feasible = feasible;
      rec.expected_dJ = expected;
      rec.actual_dJ = actual;
      sol.log.append(rec);

      if (observer_.on_accept) {
        StepEvent ev;
        ev.iter = rec.iter;
        ev.alpha = alpha;
        ev.was_feasible = was_feasible;
        ev.control_bounded = bp->control_bounded;
        ev.previous_gaps = &previous_gaps;
        ev.new_gaps = &gaps;
        ev.trajectory = &traj;
        observer_.on_accept(ev);
      }
    }

    sol.trajectory = std::move(traj);
    sol.cost = cost;
    sol.iterations = static_cast<int>(sol.log.size());
    sol.feasible = feasible;
    return sol;
  }

  const ShootingProblem& problem() const { return problem_; }
  SolverVariant variant() const { return variant_; }
  const SolverSettings& settings() const { return settings_; }

 private:
  ShootingProblem problem_;
  SolverVariant variant_;
  SolverSettings settings_;
  std::optional<ControlBounds> clamp_bounds_;
  SolverObserver observer_;
};

inline Solution solve(const ShootingProblem& problem, SolverVariant variant,
                      const std::optional<Trajectory>& init = std::nullopt,
                      const SolverSettings& settings = {}) {
  Solver solver(problem, variant, settings);
  return solver.solve(init);
}

}  // namespace boxtraj

#endif  // BOXTRAJ_SOLVER_SOLVER_HPP_
