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

#ifndef BOXTRAJ_PROBLEMS_PLANAR_QUADROTOR_HPP_
#define BOXTRAJ_PROBLEMS_PLANAR_QUADROTOR_HPP_

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "boxtraj/core/problem.hpp"

namespace boxtraj::problems {

struct QuadrotorParams {
  double mass = 1.5;         // kg
  double inertia = 0.0347;   // kg m^2 about the out-of-plane axis
  double arm_length = 0.22;  // m
  double gravity = 9.81;
  double thrust_min = 0.1;   // N per rotor
  double thrust_max = 10.3;

  void validate() const {
    if (!(mass > 0.0 && inertia > 0.0 && arm_length > 0.0 && gravity > 0.0)) {
      throw ConfigError("quadrotor: mass, inertia, arm length and gravity must be positive");
    }
    if (!(thrust_min > 0.0 && thrust_max > thrust_min)) {
      throw ConfigError("quadrotor: thrust bounds must satisfy 0 < min < max");
    }
  }

  double hover_thrust() const { return 0.5 * mass * gravity; }
};

/**
 * Planar quadrotor, explicit Euler. State (x, y, th, dx, dy, dth), controls (f_left, f_right):
 *
 *   m ddx = -(f_l + f_r) sin th,  m ddy = (f_l + f_r) cos th - m g,  I ddth = arm (f_r - f_l)
 */
class PlanarQuadrotorDynamics final : public DynamicsModel {
 public:
  PlanarQuadrotorDynamics(QuadrotorParams params, double dt) : p_(params), dt_(dt) {
    p_.validate();
    if (!(dt_ > 0.0)) throw ConfigError("quadrotor: dt must be positive");
  }

  Index state_dim() const override { return 6; }
  Index control_dim() const override { return 2; }

  VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    const double total = u[0] + u[1];
    const double s = std::sin(x[2]), c = std::cos(x[2]);
    VectorXd next = x;
    next.head<3>() += dt_ * x.tail<3>();
    next[3] += dt_ * (-total * s / p_.mass);
    next[4] += dt_ * (total * c / p_.mass - p_.gravity);
    next[5] += dt_ * (p_.arm_length * (u[1] - u[0]) / p_.inertia);
    return next;
  }

  void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u, MatrixXd& fx,
                 MatrixXd& fu) const override {
    const double total = u[0] + u[1];
    const double s = std::sin(x[2]), c = std::cos(x[2]);
    fx.setIdentity(6, 6);
    fx(0, 3) = dt_;
    fx(1, 4) = dt_;
    fx(2, 5) = dt_;
    fx(3, 2) = -dt_ * total * c / p_.mass;
    fx(4, 2) = -dt_ * total * s / p_.mass;

    fu.setZero(6, 2);
    fu(3, 0) = fu(3, 1) = -dt_ * s / p_.mass;
    fu(4, 0) = fu(4, 1) = dt_ * c / p_.mass;
    fu(5, 0) = -dt_ * p_.arm_length / p_.inertia;
    fu(5, 1) = dt_ * p_.arm_length / p_.inertia;
  }

  const QuadrotorParams& params() const { return p_; }

 private:
  QuadrotorParams p_;
  double dt_;
};

/// Quadratic tracking of a target state over the inclusive node range [first_node, last_node].
/// A range reaching the horizon N also applies at the terminal node.
struct WaypointCost {
  VectorXd target = VectorXd::Zero(6);
  VectorXd activation = (VectorXd(6) << 1.0, 1.0, 1.0, 0.1, 0.1, 0.1).finished();
  double running_weight = 1e2;
  double terminal_weight = 1e2;
  std::size_t first_node = 0;
  std::size_t last_node = 0;
};

struct QuadrotorTask {
  VectorXd initial_state = VectorXd::Zero(6);
  std::vector<WaypointCost> waypoints;
  double control_reg = 1e-2;  // around the hover thrust
};

inline ShootingProblem make_planar_quadrotor(const QuadrotorParams& params, const QuadrotorTask& task,
                                             std::size_t N, double dt = 0.03) {
  params.validate();
  if (N < 1) throw ConfigError("quadrotor: horizon must be at least one node");
  if (task.waypoints.empty()) throw ConfigError("quadrotor: at least one waypoint is required");
  if (task.initial_state.size() != 6) throw DimensionError("quadrotor: initial state must have 6 entries");

  std::vector<int> owner(N + 1, -1);
  for (std::size_t w = 0; w < task.waypoints.size(); ++w) {
    const auto& wp = task.waypoints[w];
    if (wp.target.size() != 6 || wp.activation.size() != 6) {
      throw DimensionError("quadrotor: waypoint target and activation need 6 entries");
    }
    if (wp.running_weight < 0.0 || wp.terminal_weight < 0.0 || (wp.activation.array() < 0.0).any()) {
      throw ConfigError("quadrotor: waypoint weights must be non-negative");
    }
    if (wp.first_node > wp.last_node || wp.last_node > N) {
      throw ConfigError("quadrotor: waypoint " + std::to_string(w) + " node range is outside the horizon");
    }
    for (std::size_t k = wp.first_node; k <= wp.last_node; ++k) {
      if (owner[k] >= 0) {
        throw ConfigError("quadrotor: waypoint node ranges overlap at node " + std::to_string(k));
      }
      owner[k] = static_cast<int>(w);
    }
  }

  auto dynamics = std::make_shared<PlanarQuadrotorDynamics>(params, dt);
  const VectorXd hover = VectorXd::Constant(2, params.hover_thrust());
  auto control_reg = std::make_shared<QuadraticCost>(MatrixXd::Zero(6, 6), VectorXd::Zero(6),
                                                     MatrixXd::Identity(2, 2), hover);
  std::vector<CostPtr> tracking;
  tracking.reserve(task.waypoints.size());
  for (const auto& wp : task.waypoints) {
    tracking.push_back(std::make_shared<QuadraticCost>(MatrixXd(wp.activation.asDiagonal()), wp.target,
                                                       MatrixXd::Zero(2, 2), VectorXd::Zero(2)));
  }

  std::vector<ShootingNode> nodes;
  nodes.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    auto cost = std::make_shared<SumCost>(6, 2);
    cost->add(control_reg, task.control_reg);
    if (owner[k] >= 0) cost->add(tracking[owner[k]], task.waypoints[owner[k]].running_weight);
    nodes.push_back({dynamics, cost});
  }

  CostPtr terminal;
  if (owner[N] >= 0) {
    const auto& wp = task.waypoints[owner[N]];
    terminal = QuadraticCost::terminal(wp.terminal_weight * MatrixXd(wp.activation.asDiagonal()), wp.target);
  } else {
    terminal = std::make_shared<ZeroCost>(6, 0);
  }

  return ShootingProblem(task.initial_state, std::move(nodes), terminal,
                         ControlBounds(VectorXd::Constant(2, params.thrust_min),
                                       VectorXd::Constant(2, params.thrust_max)));
}

/// Reach (3, 1) from (x0, 0): one waypoint over the whole horizon.
inline QuadrotorTask quad_goal_task(std::size_t N, double start_x = -0.3) {
  QuadrotorTask task;
  task.initial_state[0] = start_x;
  WaypointCost goal;
  goal.target << 3.0, 1.0, 0.0, 0.0, 0.0, 0.0;
  goal.first_node = 0;
  goal.last_node = N;
  task.waypoints.push_back(goal);
  return task;
}

/// Pass level through a gate at (1.5, 0.5) at mid-horizon, then reach (3, 1).
inline QuadrotorTask quad_narrow_task(std::size_t N, double start_x = -0.3) {
  QuadrotorTask task;
  task.initial_state[0] = start_x;
  WaypointCost gate;
  gate.target << 1.5, 0.5, 0.0, 0.0, 0.0, 0.0;
  gate.activation << 1.0, 10.0, 10.0, 0.0, 0.0, 0.0;
  gate.first_node = N / 2;
  gate.last_node = N / 2;
  WaypointCost goal;
  goal.target << 3.0, 1.0, 0.0, 0.0, 0.0, 0.0;
  goal.first_node = N / 2 + 1;
  goal.last_node = N;
  task.waypoints.push_back(gate);
  task.waypoints.push_back(goal);
  return task;
}

}  // namespace boxtraj::problems

#endif  // BOXTRAJ_PROBLEMS_PLANAR_QUADROTOR_HPP_
