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

#ifndef BOXTRAJ_PROBLEMS_DOUBLE_PENDULUM_HPP_
#define BOXTRAJ_PROBLEMS_DOUBLE_PENDULUM_HPP_

#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "boxtraj/core/problem.hpp"

namespace boxtraj::problems {

/// Two-link pendulum with point masses at the link tips.
struct PendulumParams {
  double m1 = 0.2295;  // kg; both links weigh about 4.5 N together
  double m2 = 0.2295;
  double l1 = 0.5;  // m
  double l2 = 0.5;
  double gravity = 9.81;
  int actuated_joint = 0;  // 0 = shoulder, 1 = elbow
  double damping = 0.01;   // viscous, per joint

  void validate() const {
    if (!(m1 > 0.0 && m2 > 0.0 && l1 > 0.0 && l2 > 0.0)) {
      throw ConfigError("pendulum: masses and lengths must be positive");
    }
    if (actuated_joint != 0 && actuated_joint != 1) {
      throw ConfigError("pendulum: actuated joint must be 0 or 1");
    }
    if (damping < 0.0) throw ConfigError("pendulum: damping must be non-negative");
  }
};

/**
 * Explicit-Euler double pendulum. State (th1, th2, dth1, dth2) with th1 measured from the
 * downward vertical and th2 relative to the first link; one torque input on the actuated
 * joint.
 */
class DoublePendulumDynamics final : public DynamicsModel {
 public:
  DoublePendulumDynamics(PendulumParams params, double dt) : p_(params), dt_(dt) {
    p_.validate();
    if (!(dt_ > 0.0)) throw ConfigError("pendulum: dt must be positive");
  }

  Index state_dim() const override { return 4; }
  Index control_dim() const override { return 1; }

  VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    const Eigen::Vector2d acc = acceleration(x, u[0]);
    VectorXd next = x;
    next.head<2>() += dt_ * x.tail<2>();
    next.tail<2>() += dt_ * acc;
    return next;
  }

  void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u, MatrixXd& fx,
                 MatrixXd& fu) const override {
    const double th2 = x[1];
    const double w1 = x[2];
    const double w2 = x[3];
    const double s2 = std::sin(th2), c2 = std::cos(th2);
    const double c12 = std::cos(x[0] + th2);
    const double g = p_.gravity;

    const Eigen::Matrix2d M = mass_matrix(th2);
    const Eigen::Matrix2d Minv = M.inverse();
    const Eigen::Vector2d acc = acceleration(x, u[0]);

    const double h = p_.m2 * p_.l1 * p_.l2 * s2;
    const double hc = p_.m2 * p_.l1 * p_.l2 * c2;

    // d(tau)/dq, tau = B u - coriolis - gravity - damping * v
    Eigen::Matrix2d dtau_dq;
    const double dG1_dth1 = (p_.m1 + p_.m2) * g * p_.l1 * std::cos(x[0]) + p_.m2 * g * p_.l2 * c12;
    const double dG_dth12 = p_.m2 * g * p_.l2 * c12;
    dtau_dq(0, 0) = -dG1_dth1;
    dtau_dq(1, 0) = -dG_dth12;
    dtau_dq(0, 1) = hc * (2.0 * w1 * w2 + w2 * w2) - dG_dth12;
    dtau_dq(1, 1) = -hc * w1 * w1 - dG_dth12;

    // dM/dth2 * acc
    const double dM11 = -2.0 * p_.m2 * p_.l1 * p_.l2 * s2;
    const double dM12 = -p_.m2 * p_.l1 * p_.l2 * s2;
    Eigen::Vector2d dM_acc(dM11 * acc[0] + dM12 * acc[1], dM12 * acc[0]);
    Eigen::Matrix2d rhs_q = dtau_dq;
    rhs_q.col(1) -= dM_acc;

    Eigen::Matrix2d dtau_dv;
    dtau_dv(0, 0) = 2.0 * h * w2 - p_.damping;
    dtau_dv(0, 1) = h * (2.0 * w1 + 2.0 * w2);
    dtau_dv(1, 0) = -2.0 * h * w1;
    dtau_dv(1, 1) = -p_.damping;

    fx.setIdentity(4, 4);
    fx.block<2, 2>(0, 2) += dt_ * Eigen::Matrix2d::Identity();
    fx.block<2, 2>(2, 0) += dt_ * Minv * rhs_q;
    fx.block<2, 2>(2, 2) += dt_ * Minv * dtau_dv;

    fu.setZero(4, 1);
    fu.block<2, 1>(2, 0) = dt_ * Minv.col(p_.actuated_joint);
  }

  Eigen::Matrix2d mass_matrix(double th2) const {
    const double c2 = std::cos(th2);
    Eigen::Matrix2d M;
    M(0, 0) = (p_.m1 + p_.m2) * p_.l1 * p_.l1 + p_.m2 * p_.l2 * p_.l2 +
              2.0 * p_.m2 * p_.l1 * p_.l2 * c2;
    M(0, 1) = p_.m2 * p_.l2 * p_.l2 + p_.m2 * p_.l1 * p_.l2 * c2;
    M(1, 0) = M(0, 1);
    M(1, 1) = p_.m2 * p_.l2 * p_.l2;
    return M;
  }

  Eigen::Vector2d acceleration(const ConstVectorRef& x, double torque) const {
    const double th1 = x[0], th2 = x[1], w1 = x[2], w2 = x[3];
    const double g = p_.gravity;
    const double h = p_.m2 * p_.l1 * p_.l2 * std::sin(th2);
    const double s12 = std::sin(th1 + th2);
    Eigen::Vector2d tau;
    tau[0] = h * (2.0 * w1 * w2 + w2 * w2) -
             ((p_.m1 + p_.m2) * g * p_.l1 * std::sin(th1) + p_.m2 * g * p_.l2 * s12) -
             p_.damping * w1;
    tau[1] = -h * w1 * w1 - p_.m2 * g * p_.l2 * s12 - p_.damping * w2;
    tau[p_.actuated_joint] += torque;
    return mass_matrix(th2).lu().solve(tau);
  }

  /// Kinetic plus potential energy (zero potential at the pivot height).
  double energy(const ConstVectorRef& x) const {
    const Eigen::Vector2d v = x.tail<2>();
    const double kinetic = 0.5 * v.dot(mass_matrix(x[1]) * v);
    const double potential = -p_.m1 * p_.gravity * p_.l1 * std::cos(x[0]) -
                             p_.m2 * p_.gravity *
                                 (p_.l1 * std::cos(x[0]) + p_.l2 * std::cos(x[0] + x[1]));
    return kinetic + potential;
  }

  const PendulumParams& params() const { return p_; }
  double dt() const { return dt_; }

 private:
  PendulumParams p_;
  double dt_;
};

struct PendulumWeights {
  double goal_running = 1e-4;
  double goal_terminal = 1e4;
  double state_reg = 1e-5;
  double control_reg = 1e-4;
};

inline VectorXd pendulum_upright() {
  VectorXd x = VectorXd::Zero(4);
  x[0] = std::numbers::pi;
  return x;
}

/**
 * Swing-up from the downward rest state to the upright equilibrium with a bounded single
 * actuator, quadratic goal cost (small running weight, large terminal weight) and state and
 * control regularization.
 */
inline ShootingProblem make_double_pendulum(const PendulumParams& params = {}, std::size_t N = 100,
                                            double horizon = 1.0, double u_limit = 5.0,
                                            const PendulumWeights& w = {}) {
  if (N < 1) throw ConfigError("pendulum: horizon must be at least one node");
  if (!(horizon > 0.0)) throw ConfigError("pendulum: horizon must be positive");
  if (!(u_limit > 0.0)) throw ConfigError("pendulum: control limit must be positive");
  const double dt = horizon / static_cast<double>(N);
  auto dynamics = std::make_shared<DoublePendulumDynamics>(params, dt);
  const VectorXd up = pendulum_upright();
  const MatrixXd I4 = MatrixXd::Identity(4, 4);
  const MatrixXd Z4 = MatrixXd::Zero(4, 4);

  auto running = std::make_shared<SumCost>(4, 1);
  running->add(std::make_shared<QuadraticCost>(I4, up, MatrixXd::Zero(1, 1), VectorXd::Zero(1)),
               w.goal_running);
  running->add(std::make_shared<QuadraticCost>(I4, VectorXd::Zero(4), MatrixXd::Zero(1, 1),
                                               VectorXd::Zero(1)),
               w.state_reg);
  running->add(std::make_shared<QuadraticCost>(Z4, VectorXd::Zero(4), MatrixXd::Identity(1, 1),
                                               VectorXd::Zero(1)),
               w.control_reg);
  auto terminal = QuadraticCost::terminal(w.goal_terminal * I4, up);

  std::vector<ShootingNode> nodes(N, ShootingNode{dynamics, running});
  return ShootingProblem(VectorXd::Zero(4), std::move(nodes), terminal,
                         ControlBounds::symmetric(1, u_limit));
}

}  // namespace boxtraj::problems

#endif  // BOXTRAJ_PROBLEMS_DOUBLE_PENDULUM_HPP_
