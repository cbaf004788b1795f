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

#ifndef BOXTRAJ_SOLVER_BACKWARD_PASS_HPP_
#define BOXTRAJ_SOLVER_BACKWARD_PASS_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "boxtraj/boxqp.hpp"
#include "boxtraj/core/problem.hpp"
#include "boxtraj/solver/types.hpp"

namespace boxtraj {

struct BackwardPassResult {
  Policy policy;
  ExpectedImprovement direction;  // sum k'Qu and sum k'Quu k
  bool control_bounded = false;
};

/**
 * Gap-aware Riccati sweep.
 *
 * The Value gradient of node k+1 is deflected by the gap, Vx+ = Vx + Vxx f_{k+1}, before it
 * enters the Hamiltonian. With bounds and a feasible iterate the feed-forward term comes
 * from a box QP warm-started with the previous (clamped) feed-forward, and the feedback is
 * restricted to the free subspace. Otherwise the unbounded Newton direction is used.
 *
 * `reg` is added to the Quu diagonal used for the direction only; Q and V terms stored in
 * `diffs` are unregularized.
 */
inline BackwardPassResult backward_pass(std::vector<NodeDiff>& diffs, const Gaps& gaps,
                                        const std::optional<ControlBounds>& bounds,
                                        const Trajectory& traj, bool feasible, double reg,
                                        const Policy* prev_policy = nullptr,
                                        const BoxQPSettings& qp_settings = {}) {
  if (diffs.empty() || gaps.defects.size() != diffs.size() || traj.states.size() != diffs.size() ||
      traj.controls.size() + 1 != diffs.size()) {
    throw DimensionError("backward_pass: diffs, gaps and trajectory lengths disagree");
  }
  if (reg < 0.0) throw ConfigError("backward_pass: negative regularization");
  const std::size_t N = diffs.size() - 1;
  const bool bounded = bounds.has_value() && feasible;
  const bool warm = prev_policy != nullptr && prev_policy->horizon() == N;

  BackwardPassResult out;
  out.control_bounded = bounded;
  Policy& policy = out.policy;
  policy.k.resize(N);
  policy.K.resize(N);
  if (bounded) policy.boxqp_data.emplace(N);

  NodeDiff& term = diffs[N];
  term.Vx = term.lx;
  term.Vxx = term.lxx;

  for (std::size_t step = N; step-- > 0;) {
    const std::size_t k = step;
    NodeDiff& d = diffs[k];
    const NodeDiff& next = diffs[k + 1];
    const Index nx = d.fx.cols();
    const Index nu = d.fu.cols();

    const VectorXd Vx_plus = next.Vx + next.Vxx * gaps.defects[k + 1];
    const MatrixXd fxT_Vxx = d.fx.transpose() * next.Vxx;
    const MatrixXd fuT_Vxx = d.fu.transpose() * next.Vxx;
    d.Qx = d.lx + d.fx.transpose() * Vx_plus;
    d.Qu = d.lu + d.fu.transpose() * Vx_plus;
    d.Qxx = d.lxx + fxT_Vxx * d.fx;
    d.Qxu = d.lxu + fxT_Vxx * d.fu;
    d.Quu = d.luu + fuT_Vxx * d.fu;
    const MatrixXd Qux = d.Qxu.transpose();

    VectorXd& kff = policy.k[k];
    MatrixXd& Kfb = policy.K[k];
    kff.setZero(nu);
    Kfb.setZero(nu, nx);

    if (nu > 0) {
      MatrixXd Quu_reg = d.Quu;
      Quu_reg.diagonal().array() += reg;

      if (bounded) {
        BoxQPProblem qp;
        qp.H = Quu_reg;
        qp.q = d.Qu;
        qp.lower = bounds->lower() - traj.controls[k];
        qp.upper = bounds->upper() - traj.controls[k];
        qp.x0 = warm ? prev_policy->k[k] : VectorXd::Zero(nu);
        BoxQPResult res;
        try {
          res = solve_boxqp(qp, qp_settings);
        } catch (const FactorizationError& e) {
          throw BackwardPassError("box QP failed at node " + std::to_string(k) + ": " + e.what());
        }
        kff = res.x_star;
        if (!res.free_set.empty()) {
          MatrixXd rhs(res.free_set.size(), nx);
          for (std::size_t r = 0; r < res.free_set.size(); ++r) rhs.row(r) = Qux.row(res.free_set[r]);
          const MatrixXd Kfree = -res.free_factorization.solve(rhs);
          for (std::size_t r = 0; r < res.free_set.size(); ++r) {
            Kfb.row(res.free_set[r]) = Kfree.row(r);
          }
        }
        auto& data = (*policy.boxqp_data)[k];
        data.free_set = std::move(res.free_set);
        data.clamped_set = std::move(res.clamped_set);
        data.free_factorization = std::move(res.free_factorization);
      } else {
        Eigen::LLT<MatrixXd> llt(Quu_reg);
        if (llt.info() != Eigen::Success) {
          throw BackwardPassError("Quu is not positive definite at node " + std::to_string(k));
        }
        kff = -llt.solve(d.Qu);
        Kfb = -llt.solve(Qux);
      }
    }

    const VectorXd Quu_k = d.Quu * kff;
    d.Vx = d.Qx + Kfb.transpose() * (Quu_k + d.Qu) + d.Qxu * kff;
    MatrixXd Vxx = d.Qxx + Kfb.transpose() * d.Quu * Kfb + Kfb.transpose() * Qux + d.Qxu * Kfb;
    d.Vxx = 0.5 * (Vxx + Vxx.transpose());

    if (!d.Vx.allFinite() || !d.Vxx.allFinite() || !kff.allFinite() || !Kfb.allFinite()) {
      throw BackwardPassError("non-finite Value derivatives at node " + std::to_string(k));
    }

    out.direction.delta1 += kff.dot(d.Qu);
    out.direction.delta2 += kff.dot(Quu_k);
  }
  return out;
}

}  // namespace boxtraj

#endif  // BOXTRAJ_SOLVER_BACKWARD_PASS_HPP_
