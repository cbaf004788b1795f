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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "boxtraj/core/derivative_check.hpp"
#include "boxtraj/core/problem.hpp"
#include "boxtraj/problems/double_pendulum.hpp"
#include "boxtraj/problems/lq.hpp"
#include "boxtraj/problems/planar_quadrotor.hpp"

using namespace boxtraj;

namespace {

ShootingProblem lq_problem(std::size_t N, VectorXd x0) {
  return problems::make_lq_double_integrator(N, 0.1, std::nullopt, std::move(x0));
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Trajectory random_trajectory(const ShootingProblem& p, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> ud(-scale, scale);
  Trajectory t = cold_start(p);
  for (auto& x : t.states)
    for (Index i = 0; i < x.size(); ++i) x[i] = ud(rng);
  for (auto& u : t.controls)
    for (Index i = 0; i < u.size(); ++i) u[i] = ud(rng);
  return t;
}

}  // namespace

TEST(ControlBounds, RejectsCrossedBounds) {
  EXPECT_THROW(ControlBounds(vec({1.0}), vec({0.0})), ConfigError);
}

TEST(ControlBounds, ClampAndContains) {
  ControlBounds b(vec({-1.0, 0.0}), vec({1.0, kInf}));
  EXPECT_TRUE(b.has_finite_entry());
  EXPECT_FALSE(b.all_finite());
  const VectorXd c = b.clamp(vec({-3.0, 7.0}));
  EXPECT_EQ(c[0], -1.0);
  EXPECT_EQ(c[1], 7.0);
  EXPECT_TRUE(b.contains(c));
  EXPECT_FALSE(b.contains(vec({2.0, 0.0})));
}

TEST(ShootingProblem, RejectsBoundsWithoutFiniteEntry) {
  auto p = lq_problem(3, VectorXd::Zero(2));
  EXPECT_THROW(p.with_bounds(ControlBounds::unlimited(1)), ConfigError);
}

TEST(ShootingProblem, RejectsEmptyHorizon) {
  EXPECT_THROW(ShootingProblem(VectorXd::Zero(2), {}, QuadraticCost::terminal(MatrixXd::Identity(2, 2),
                                                                             VectorXd::Zero(2))),
               ConfigError);
}

TEST(ShootingProblem, RejectsMismatchedNodeDimensions) {
  auto dyn = std::make_shared<LinearDynamics>(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 1));
  auto cost = std::make_shared<ZeroCost>(3, 1);
  EXPECT_THROW(ShootingProblem(VectorXd::Zero(2), {{dyn, cost}}, std::make_shared<ZeroCost>(2, 0)),
               DimensionError);
}

TEST(CalcCost, ZeroCostModelsGiveZero) {
  auto dyn = std::make_shared<LinearDynamics>(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 1));
  auto zero = std::make_shared<ZeroCost>(2, 1);
  ShootingProblem p(vec({1.0, 2.0}), {{dyn, zero}, {dyn, zero}}, std::make_shared<ZeroCost>(2, 0));
  std::mt19937_64 rng(3);
  EXPECT_EQ(calc_cost(p, random_trajectory(p, rng)), 0.0);
}

TEST(CalcCost, OriginIsZero) {
  auto p = lq_problem(5, VectorXd::Zero(2));
  EXPECT_EQ(calc_cost(p, cold_start(p)), 0.0);
}

TEST(CalcCost, HandBuiltTwoNodeTrajectory) {
  auto p = lq_problem(2, vec({1.0, 0.0}));
  Trajectory t;
  t.states = {vec({1.0, 0.0}), vec({0.5, -1.0}), vec({2.0, 3.0})};
  t.controls = {vec({0.3}), vec({-0.7})};
  // term-by-term summation computed independently
  EXPECT_NEAR(calc_cost(p, t), 651.1279, 1e-10);
}

TEST(CalcCost, DimensionMismatchThrows) {
  auto p = lq_problem(2, vec({1.0, 0.0}));
  Trajectory t = cold_start(p);
  t.controls.pop_back();
  EXPECT_THROW(calc_cost(p, t), DimensionError);
}

TEST(CalcDiff, LinearQuadraticBlocksEqualProblemMatrices) {
  const double dt = 0.1;
  auto p = lq_problem(4, vec({1.0, 0.0}));
  std::mt19937_64 rng(11);
  const auto diffs = calc_diff(p, random_trajectory(p, rng));
  ASSERT_EQ(diffs.size(), 5u);
  MatrixXd A(2, 2);
  A << 1.0, dt, 0.0, 1.0;
  MatrixXd B(2, 1);
  B << 0.0, dt;
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ((diffs[k].fx - A).norm(), 0.0);
    EXPECT_EQ((diffs[k].fu - B).norm(), 0.0);
    EXPECT_EQ((diffs[k].lxx - MatrixXd::Identity(2, 2)).norm(), 0.0);
    EXPECT_NEAR(diffs[k].luu(0, 0), 0.01, 1e-15);
  }
  EXPECT_EQ((diffs[4].lxx - 100.0 * MatrixXd::Identity(2, 2)).norm(), 0.0);
  EXPECT_EQ(diffs[4].lu.size(), 0);
}

TEST(CalcDiff, PendulumAtRestMatchesFiniteDifferences) {
  auto p = problems::make_double_pendulum();
  const auto diffs = calc_diff(p, cold_start(p));
  const auto report = check_derivatives(*p.node(0).dynamics, VectorXd::Zero(4), VectorXd::Zero(1), 1e-6);
  EXPECT_LT(report.worst(), 1e-5);
  EXPECT_EQ(diffs[0].fx.rows(), 4);
  EXPECT_EQ(diffs[0].fu.cols(), 1);
}

TEST(CalcDiff, QuadrotorGoalGradientAtHover) {
  const auto task = problems::quad_goal_task(10, -0.3);
  auto p = problems::make_planar_quadrotor({}, task, 10);
  const problems::QuadrotorParams params;
  Trajectory t = cold_start(p);
  for (auto& u : t.controls) u = VectorXd::Constant(2, params.hover_thrust());
  const auto diffs = calc_diff(p, t);
  const auto& wp = task.waypoints.front();
  const VectorXd expected = wp.running_weight * wp.activation.cwiseProduct(task.initial_state - wp.target);
  EXPECT_LT((diffs[0].lx - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(diffs[0].lu.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CalcDiff, HessianBlocksAreSymmetric) {
  std::mt19937_64 rng(5);
  for (const auto& p : {problems::make_double_pendulum(),
                        problems::make_planar_quadrotor({}, problems::quad_narrow_task(20), 20)}) {
    const auto diffs = calc_diff(p, random_trajectory(p, rng));
    for (const auto& d : diffs) {
      EXPECT_LT((d.lxx - d.lxx.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      if (d.luu.size() > 0) {
        EXPECT_LT((d.luu - d.luu.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

namespace {

class NanDynamics final : public DynamicsModel {
 public:
  Index state_dim() const override { return 1; }
  Index control_dim() const override { return 1; }
  VectorXd calc(const ConstVectorRef&, const ConstVectorRef&) const override {
    return VectorXd::Constant(1, std::nan(""));
  }
  void calc_diff(const ConstVectorRef&, const ConstVectorRef&, MatrixXd& fx, MatrixXd& fu) const override {
    fx = MatrixXd::Constant(1, 1, std::nan(""));
    fu = MatrixXd::Zero(1, 1);
  }
};

}  // namespace

TEST(CalcDiff, NonFiniteModelOutputRaisesModelError) {
  auto dyn = std::make_shared<NanDynamics>();
  ShootingProblem p(VectorXd::Zero(1), {{dyn, std::make_shared<ZeroCost>(1, 1)}},
                    std::make_shared<ZeroCost>(1, 0));
  EXPECT_THROW(calc_diff(p, cold_start(p)), ModelError);
}

TEST(ComputeGaps, RolloutHasNoGaps) {
  auto p = problems::make_double_pendulum();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(-5.0, 5.0);
  std::vector<VectorXd> us;
  for (std::size_t k = 0; k < p.horizon(); ++k) us.push_back(VectorXd::Constant(1, ud(rng)));
  const Gaps g = compute_gaps(p, rollout(p, us));
  EXPECT_EQ(g.defects.size(), p.horizon() + 1);
  EXPECT_LT(g.inf_norm, 1e-12);
}

TEST(ComputeGaps, OnlyInitialDefect) {
  auto p = lq_problem(6, vec({1.0, 0.0}));
  Trajectory t;
  t.states.assign(7, VectorXd::Zero(2));
  t.controls.assign(6, VectorXd::Zero(1));
  const Gaps g = compute_gaps(p, t);
  EXPECT_EQ(g.defects[0], vec({1.0, 0.0}));
  for (std::size_t k = 1; k < g.defects.size(); ++k) EXPECT_EQ(g.defects[k].norm(), 0.0);
  EXPECT_EQ(g.inf_norm, 1.0);
}

TEST(ComputeGaps, MatchesPerNodeResimulation) {
  auto p = problems::make_double_pendulum();
  std::mt19937_64 rng(23);
  const Trajectory t = random_trajectory(p, rng, 2.0);
  const Gaps g = compute_gaps(p, t);
  problems::DoublePendulumDynamics model({}, 0.01);
  double inf = (p.initial_state() - t.states[0]).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < p.horizon(); ++k) {
    const VectorXd expected = model.calc(t.states[k], t.controls[k]) - t.states[k + 1];
    EXPECT_EQ((g.defects[k + 1] - expected).cwiseAbs().maxCoeff(), 0.0);
    inf = std::max(inf, expected.cwiseAbs().maxCoeff());
  }
  EXPECT_EQ(g.inf_norm, inf);
}

TEST(ComputeGaps, IsPure) {
  auto p = problems::make_double_pendulum();
  std::mt19937_64 rng(29);
  const Trajectory t = random_trajectory(p, rng);
  const Gaps a = compute_gaps(p, t);
  const Gaps b = compute_gaps(p, t);
  for (std::size_t k = 0; k < a.defects.size(); ++k) EXPECT_EQ(a.defects[k], b.defects[k]);
}

TEST(ComputeGaps, ScaledAndZeros) {
  auto p = lq_problem(3, vec({2.0, -1.0}));
  const Gaps g = compute_gaps(p, cold_start(p));
  const Gaps h = g.scaled(0.25);
  EXPECT_DOUBLE_EQ(h.inf_norm, 0.25 * g.inf_norm);
  const Gaps z = Gaps::zeros_like(p);
  EXPECT_EQ(z.defects.size(), 4u);
  EXPECT_EQ(z.inf_norm, 0.0);
}

TEST(DerivativeCheck, LinearDynamicsIsExact) {
  MatrixXd A(2, 2);
  A << 1.0, 0.3, -0.2, 0.9;
  MatrixXd B(2, 1);
  B << 0.5, -1.5;
  LinearDynamics dyn(A, B, vec({0.1, 0.2}));
  EXPECT_LT(check_derivatives(dyn, vec({0.3, -0.7}), vec({2.0})).worst(), 1e-9);
}

TEST(DerivativeCheck, PendulumSeededPoint) {
  problems::DoublePendulumDynamics dyn({}, 0.01);
  const VectorXd x = vec({std::numbers::pi / 4.0, std::numbers::pi / 3.0, 0.5, -0.2});
  EXPECT_LT(check_derivatives(dyn, x, vec({1.0}), 1e-6).worst(), 1e-5);
}

TEST(DerivativeCheck, QuadraticCostHessian) {
  MatrixXd Q(3, 3);
  Q << 2.0, 0.5, 0.0, 0.5, 1.0, 0.1, 0.0, 0.1, 3.0;
  MatrixXd R(2, 2);
  R << 1.5, 0.2, 0.2, 0.7;
  QuadraticCost cost(Q, vec({1.0, 0.0, -1.0}), R, vec({0.5, 0.5}));
  const auto r = check_derivatives(cost, vec({0.2, -0.4, 1.1}), vec({-0.3, 0.8}));
  EXPECT_LT(r.max_rel_error.at("lxx"), 1e-7);
  EXPECT_LT(r.max_rel_error.at("luu"), 1e-7);
  EXPECT_LT(r.worst(), 1e-7);
}

namespace {

class WrongJacobian final : public DynamicsModel {
 public:
  Index state_dim() const override { return 2; }
  Index control_dim() const override { return 1; }
  VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    return vec({x[0] * x[1], u[0]});
  }
  void calc_diff(const ConstVectorRef& x, const ConstVectorRef&, MatrixXd& fx, MatrixXd& fu) const override {
    fx = MatrixXd::Zero(2, 2);
    fx(0, 0) = x[0];  // should be x[1]
    fx(0, 1) = x[0];
    fu = MatrixXd::Zero(2, 1);
    fu(1, 0) = 1.0;
  }
};

}  // namespace

TEST(DerivativeCheck, DetectsWrongJacobian) {
  WrongJacobian dyn;
  const auto r = check_derivatives(dyn, vec({2.0, -1.0}), vec({0.0}));
  EXPECT_GT(r.max_rel_error.at("fx"), 0.1);
  EXPECT_LT(r.max_rel_error.at("fu"), 1e-10);
}

TEST(DerivativeCheck, RejectsNonPositiveEps) {
  LinearDynamics dyn(MatrixXd::Identity(1, 1), MatrixXd::Identity(1, 1));
  EXPECT_THROW(check_derivatives(dyn, vec({0.0}), vec({0.0}), 0.0), ConfigError);
}

TEST(ColdStart, RepeatsInitialStateWithZeroControls) {
  auto p = lq_problem(4, vec({1.0, -2.0}));
  const Trajectory t = cold_start(p);
  ASSERT_EQ(t.states.size(), 5u);
  for (const auto& x : t.states) EXPECT_EQ(x, vec({1.0, -2.0}));
  for (const auto& u : t.controls) EXPECT_EQ(u.norm(), 0.0);
}
