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

#ifndef BOXTRAJ_PROBLEMS_SQUASHED_HPP_
#define BOXTRAJ_PROBLEMS_SQUASHED_HPP_

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "boxtraj/core/problem.hpp"
#include "boxtraj/solver/solver.hpp"
#include "boxtraj/solver/squash.hpp"

namespace boxtraj::problems {

/// x' = f(x, s(u))
class SquashedDynamics final : public DynamicsModel {
 public:
  SquashedDynamics(DynamicsPtr inner, ControlBounds bounds, double beta)
      : inner_(std::move(inner)), bounds_(std::move(bounds)), beta_(beta) {
    detail::check_squash_args(bounds_, beta_, inner_->control_dim());
  }

  Index state_dim() const override { return inner_->state_dim(); }
  Index control_dim() const override { return inner_->control_dim(); }
  Index next_state_dim() const override { return inner_->next_state_dim(); }

  VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    return inner_->calc(x, squash(u, bounds_, beta_));
  }

  void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u, MatrixXd& fx,
                 MatrixXd& fu) const override {
    inner_->calc_diff(x, squash(u, bounds_, beta_), fx, fu);
    fu = fu * squash_jacobian(u, bounds_, beta_).asDiagonal();
  }

 private:
  DynamicsPtr inner_;
  ControlBounds bounds_;
  double beta_;
};

/// l(x, s(u)) with exact chain-ruled derivatives (including the s'' curvature term).
class SquashedCost final : public CostModel {
 public:
  SquashedCost(CostPtr inner, ControlBounds bounds, double beta)
      : inner_(std::move(inner)), bounds_(std::move(bounds)), beta_(beta) {
    detail::check_squash_args(bounds_, beta_, inner_->control_dim());
  }

  Index state_dim() const override { return inner_->state_dim(); }
  Index control_dim() const override { return inner_->control_dim(); }

  double calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    return inner_->calc(x, squash(u, bounds_, beta_));
  }

  void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u,
                 CostDerivatives& out) const override {
    inner_->calc_diff(x, squash(u, bounds_, beta_), out);
    const VectorXd ds = squash_jacobian(u, bounds_, beta_);
    const VectorXd dds = squash_hessian(u, bounds_, beta_);
    out.luu = ds.asDiagonal() * out.luu * ds.asDiagonal();
    out.luu.diagonal() += out.lu.cwiseProduct(dds);
    out.lxu = out.lxu * ds.asDiagonal();
    out.lu = out.lu.cwiseProduct(ds);
  }

 private:
  CostPtr inner_;
  ControlBounds bounds_;
  double beta_;
};

/// Unbounded problem whose dynamics and stage costs consume s(u) instead of u.
inline ShootingProblem wrap_squashed(const ShootingProblem& problem, double beta = 2.0) {
  if (!problem.bounds() || !problem.bounds()->all_finite()) {
    throw SquashError("wrap_squashed: problem needs finite control bounds");
  }
  const ControlBounds& b = *problem.bounds();
  std::vector<ShootingNode> nodes;
  nodes.reserve(problem.horizon());
  for (const auto& n : problem.nodes()) {
    nodes.push_back({std::make_shared<SquashedDynamics>(n.dynamics, b, beta),
                     std::make_shared<SquashedCost>(n.cost, b, beta)});
  }
  return ShootingProblem(problem.initial_state(), std::move(nodes), problem.terminal_cost());
}

struct SquashedSolution {
  Solution solution;  // trajectory holds the physical controls s(u)
  std::vector<VectorXd> raw_controls;
};

/// Squashing baseline: bounds-free Fddp on the wrapped problem.
inline SquashedSolution solve_squashed(const ShootingProblem& problem, double beta = 2.0,
                                       const std::optional<Trajectory>& init = std::nullopt,
                                       const SolverSettings& settings = {}) {
  const ShootingProblem wrapped = wrap_squashed(problem, beta);
  SquashedSolution out;
  out.solution = solve(wrapped, SolverVariant::Fddp, init, settings);
  out.raw_controls = out.solution.trajectory.controls;
  for (auto& u : out.solution.trajectory.controls) u = squash(u, *problem.bounds(), beta);
  return out;
}

}  // namespace boxtraj::problems

#endif  // BOXTRAJ_PROBLEMS_SQUASHED_HPP_
