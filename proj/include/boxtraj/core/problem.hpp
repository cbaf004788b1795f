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

#ifndef BOXTRAJ_CORE_PROBLEM_HPP_
#define BOXTRAJ_CORE_PROBLEM_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boxtraj/core/errors.hpp"
#include "boxtraj/core/models.hpp"

namespace boxtraj {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Elementwise control box [lower, upper]; entries may be infinite.
class ControlBounds {
 public:
  ControlBounds(VectorXd lower, VectorXd upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) throw DimensionError("ControlBounds: size mismatch");
    for (Index i = 0; i < lower_.size(); ++i) {
      if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
        throw ConfigError("ControlBounds: lower must not exceed upper");
      }
    }
  }

  static ControlBounds symmetric(Index n, double limit) {
    return {VectorXd::Constant(n, -limit), VectorXd::Constant(n, limit)};
  }
  static ControlBounds unlimited(Index n) { return symmetric(n, kInf); }

  const VectorXd& lower() const { return lower_; }
  const VectorXd& upper() const { return upper_; }
  Index size() const { return lower_.size(); }

  bool has_finite_entry() const {
    return lower_.array().isFinite().any() || upper_.array().isFinite().any();
  }
  bool all_finite() const {
    return lower_.array().isFinite().all() && upper_.array().isFinite().all();
  }

  VectorXd clamp(const ConstVectorRef& u) const { return u.cwiseMax(lower_).cwiseMin(upper_); }

  bool contains(const ConstVectorRef& u) const {
    return (u.array() >= lower_.array()).all() && (u.array() <= upper_.array()).all();
  }

 private:
  VectorXd lower_;
  VectorXd upper_;
};

/// Shooting states (N+1) and controls (N) of one iterate.
struct Trajectory {
  std::vector<VectorXd> states;
  std::vector<VectorXd> controls;

  std::size_t horizon() const { return controls.size(); }
};

/// One running node: dynamics from node k to k+1 and the stage cost at k.
struct ShootingNode {
  DynamicsPtr dynamics;
  CostPtr cost;
};

/**
 * Multiple-shooting optimal control problem
 *
 *   min  sum_k l_k(x_k, u_k) + l_N(x_N)
 *   s.t. x_0 = x0,  x_{k+1} = f_k(x_k, u_k),  lower <= u_k <= upper.
 *
 * Immutable after construction.
 */
class ShootingProblem {
 public:
  ShootingProblem(VectorXd initial_state, std::vector<ShootingNode> nodes, CostPtr terminal_cost,
                  std::optional<ControlBounds> bounds = std::nullopt)
      : x0_(std::move(initial_state)),
        nodes_(std::move(nodes)),
        terminal_(std::move(terminal_cost)),
        bounds_(std::move(bounds)) {
    validate();
  }

  std::size_t horizon() const { return nodes_.size(); }
  const VectorXd& initial_state() const { return x0_; }
  const std::vector<ShootingNode>& nodes() const { return nodes_; }
  const ShootingNode& node(std::size_t k) const { return nodes_[k]; }
  const CostPtr& terminal_cost() const { return terminal_; }
  const std::optional<ControlBounds>& bounds() const { return bounds_; }

  Index state_dim(std::size_t k) const {
    return k < nodes_.size() ? nodes_[k].dynamics->state_dim() : terminal_->state_dim();
  }
  Index control_dim(std::size_t k) const { return nodes_[k].dynamics->control_dim(); }

  /// Same nodes and bounds, different initial state.
  ShootingProblem with_initial_state(VectorXd x0) const {
    return {std::move(x0), nodes_, terminal_, bounds_};
  }
  ShootingProblem with_bounds(std::optional<ControlBounds> bounds) const {
    return {x0_, nodes_, terminal_, std::move(bounds)};
  }

  void check_trajectory(const Trajectory& traj) const {
    if (traj.controls.size() != nodes_.size() || traj.states.size() != nodes_.size() + 1) {
      throw DimensionError("trajectory length does not match the problem horizon");
    }
    for (std::size_t k = 0; k <= nodes_.size(); ++k) {
      if (traj.states[k].size() != state_dim(k)) {
        throw DimensionError("state " + std::to_string(k) + " has wrong dimension");
      }
    }
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (traj.controls[k].size() != control_dim(k)) {
        throw DimensionError("control " + std::to_string(k) + " has wrong dimension");
      }
    }
  }

 private:
  void validate() const {
    if (nodes_.empty()) throw ConfigError("ShootingProblem: needs at least one node");
    if (!terminal_) throw ConfigError("ShootingProblem: missing terminal cost");
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const auto& n = nodes_[k];
      if (!n.dynamics || !n.cost) throw ConfigError("ShootingProblem: null model in node");
      if (n.cost->state_dim() != n.dynamics->state_dim() ||
          n.cost->control_dim() != n.dynamics->control_dim()) {
        throw DimensionError("node " + std::to_string(k) + ": cost and dynamics sizes differ");
      }
      const Index next = k + 1 < nodes_.size() ? nodes_[k + 1].dynamics->state_dim()
                                               : terminal_->state_dim();
      if (n.dynamics->next_state_dim() != next) {
        throw DimensionError("node " + std::to_string(k) + ": next-state dimension mismatch");
      }
    }
    if (terminal_->control_dim() != 0) {
      throw DimensionError("terminal cost must not depend on controls");
    }
    if (x0_.size() != nodes_.front().dynamics->state_dim()) {
      throw DimensionError("initial state has wrong dimension");
    }
    if (bounds_) {
      if (!bounds_->has_finite_entry()) {
        throw ConfigError("declared control bounds need at least one finite entry");
      }
      for (const auto& n : nodes_) {
        if (n.dynamics->control_dim() != bounds_->size()) {
          throw DimensionError("control bounds size differs from a node's control dimension");
        }
      }
    }
  }

  VectorXd x0_;
  std::vector<ShootingNode> nodes_;
  CostPtr terminal_;
  std::optional<ControlBounds> bounds_;
};

/// Cost/dynamics derivatives plus the Hamiltonian and Value terms filled by the backward pass.
struct NodeDiff {
  VectorXd lx, lu;
  MatrixXd lxx, lxu, luu;
  MatrixXd fx, fu;
  VectorXd Qx, Qu;
  MatrixXd Qxx, Qxu, Quu;
  VectorXd Vx;
  MatrixXd Vxx;
};

/// Defects f_0 = x0 - states[0], f_{k+1} = f(x_k, u_k) - x_{k+1}.
struct Gaps {
  std::vector<VectorXd> defects;
  double inf_norm = 0.0;

  void update_norm() {
    inf_norm = 0.0;
    for (const auto& d : defects) {
      if (d.size() > 0) inf_norm = std::max(inf_norm, d.cwiseAbs().maxCoeff());
    }
  }

  Gaps scaled(double factor) const {
    Gaps out{defects, 0.0};
    for (auto& d : out.defects) d *= factor;
    out.update_norm();
    return out;
  }

  static Gaps zeros_like(const ShootingProblem& problem) {
    Gaps g;
    g.defects.reserve(problem.horizon() + 1);
    for (std::size_t k = 0; k <= problem.horizon(); ++k) {
      g.defects.push_back(VectorXd::Zero(problem.state_dim(k)));
    }
    return g;
  }
};

namespace detail {

inline void require_finite(const VectorXd& v, const char* what) {
  if (!v.allFinite()) throw ModelError(std::string(what) + " returned non-finite values");
}

}  // namespace detail

/// Sum of stage costs plus the terminal cost.
inline double calc_cost(const ShootingProblem& problem, const Trajectory& traj) {
  problem.check_trajectory(traj);
  double total = 0.0;
  for (std::size_t k = 0; k < problem.horizon(); ++k) {
    total += problem.node(k).cost->calc(traj.states[k], traj.controls[k]);
  }
  total += problem.terminal_cost()->calc(traj.states.back(), VectorXd(0));
  return total;
}

/// Cost and dynamics derivatives at every node; Q and V parts are zeroed.
inline std::vector<NodeDiff> calc_diff(const ShootingProblem& problem, const Trajectory& traj) {
  problem.check_trajectory(traj);
  const std::size_t N = problem.horizon();
  std::vector<NodeDiff> diffs(N + 1);
  CostDerivatives cd;
  for (std::size_t k = 0; k <= N; ++k) {
    NodeDiff& d = diffs[k];
    const Index nx = problem.state_dim(k);
    const Index nu = k < N ? problem.control_dim(k) : 0;
    if (k < N) {
      const auto& node = problem.node(k);
      node.cost->calc_diff(traj.states[k], traj.controls[k], cd);
      node.dynamics->calc_diff(traj.states[k], traj.controls[k], d.fx, d.fu);
      if (!d.fx.allFinite() || !d.fu.allFinite()) {
        throw ModelError("dynamics Jacobian at node " + std::to_string(k) + " is not finite");
      }
    } else {
      problem.terminal_cost()->calc_diff(traj.states[k], VectorXd(0), cd);
    }
    if (!cd.lx.allFinite() || !cd.lxx.allFinite() || !cd.lu.allFinite() || !cd.luu.allFinite() ||
        !cd.lxu.allFinite()) {
      throw ModelError("cost derivatives at node " + std::to_string(k) + " are not finite");
    }
    d.lx = std::move(cd.lx);
    d.lu = std::move(cd.lu);
    d.lxx = std::move(cd.lxx);
    d.lxu = std::move(cd.lxu);
    d.luu = std::move(cd.luu);
    d.Qx.setZero(nx);
    d.Qu.setZero(nu);
    d.Qxx.setZero(nx, nx);
    d.Qxu.setZero(nx, nu);
    d.Quu.setZero(nu, nu);
    d.Vx.setZero(nx);
    d.Vxx.setZero(nx, nx);
  }
  return diffs;
}

inline Gaps compute_gaps(const ShootingProblem& problem, const Trajectory& traj) {
  problem.check_trajectory(traj);
  const std::size_t N = problem.horizon();
  Gaps gaps;
  gaps.defects.resize(N + 1);
  gaps.defects[0] = problem.initial_state() - traj.states[0];
  for (std::size_t k = 0; k < N; ++k) {
    const VectorXd next = problem.node(k).dynamics->calc(traj.states[k], traj.controls[k]);
    detail::require_finite(next, "dynamics");
    gaps.defects[k + 1] = next - traj.states[k + 1];
  }
  gaps.update_norm();
  return gaps;
}

/// States x0 repeated, controls zero.
inline Trajectory cold_start(const ShootingProblem& problem) {
  Trajectory t;
  const std::size_t N = problem.horizon();
  t.states.assign(N + 1, problem.initial_state());
  for (std::size_t k = 1; k <= N; ++k) {
    if (problem.state_dim(k) != problem.initial_state().size()) {
      throw DimensionError("cold start needs a constant state dimension");
    }
  }
  t.controls.reserve(N);
  for (std::size_t k = 0; k < N; ++k) t.controls.push_back(VectorXd::Zero(problem.control_dim(k)));
  return t;
}

/// Single-shooting rollout of the given controls from the problem's initial state.
inline Trajectory rollout(const ShootingProblem& problem, std::vector<VectorXd> controls) {
  if (controls.size() != problem.horizon()) throw DimensionError("rollout: wrong control count");
  Trajectory t;
  t.controls = std::move(controls);
  t.states.reserve(problem.horizon() + 1);
  t.states.push_back(problem.initial_state());
  for (std::size_t k = 0; k < problem.horizon(); ++k) {
    if (t.controls[k].size() != problem.control_dim(k)) {
      throw DimensionError("rollout: control " + std::to_string(k) + " has wrong dimension");
    }
    VectorXd next = problem.node(k).dynamics->calc(t.states[k], t.controls[k]);
    detail::require_finite(next, "dynamics");
    t.states.push_back(std::move(next));
  }
  return t;
}

}  // namespace boxtraj

#endif  // BOXTRAJ_CORE_PROBLEM_HPP_
