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

#ifndef BOXTRAJ_SOLVER_LINE_SEARCH_HPP_
#define BOXTRAJ_SOLVER_LINE_SEARCH_HPP_

#include <vector>

#include "boxtraj/core/problem.hpp"
#include "boxtraj/solver/types.hpp"

namespace boxtraj {

/**
 * Quadratic model of the cost change for step length `alpha`.
 *
 *   delta1 = sum k'Qu + sum_k f_k'(Vx+_k - Vxx_k dx_k)
 *   delta2 = sum k'Quu k + sum_k f_k'(2 Vxx_k dx_k - Vxx_k f_k)
 *
 * with Vx+_k = Vx_k + Vxx_k f_k and dx_k = (x_k^ - x_k) / alpha the trial deflection per
 * unit step. On LQ problems with unconstrained gains the model is exact for every alpha.
 * With zero gaps the gap terms vanish.
 */
inline double expected_improvement(const ExpectedImprovement& direction, const Gaps& gaps,
                                   const std::vector<NodeDiff>& diffs, const Trajectory& traj,
                                   const Trajectory& trial, double alpha) {
  double delta1 = direction.delta1;
  double delta2 = direction.delta2;
  if (gaps.inf_norm > 0.0 && alpha > 0.0) {
    if (diffs.size() != gaps.defects.size() || traj.states.size() != gaps.defects.size() ||
        trial.states.size() != gaps.defects.size()) {
      throw DimensionError("expected_improvement: size mismatch");
    }
    for (std::size_t k = 0; k < gaps.defects.size(); ++k) {
      const VectorXd& f = gaps.defects[k];
      const MatrixXd& Vxx = diffs[k].Vxx;
      const VectorXd dx = (trial.states[k] - traj.states[k]) / alpha;
      const VectorXd Vxx_f = Vxx * f;
      const VectorXd Vxx_dx = Vxx * dx;
      delta1 += f.dot(diffs[k].Vx + Vxx_f - Vxx_dx);
      delta2 += f.dot(2.0 * Vxx_dx - Vxx_f);
    }
  }
  return ExpectedImprovement{delta1, delta2}.at(alpha);
}

/**
 * Goldstein-style acceptance. Cost changes are trial minus current (negative means
 * improvement). Predicted descent needs a sufficient fraction of it; predicted ascent,
 * possible while gaps are open, is accepted when bounded by a multiple of the prediction.
 */
inline bool accept_step(double expected, double actual, const SolverSettings& settings) {
  if (expected <= 0.0) return actual <= settings.goldstein_lo * expected;
  return actual <= settings.goldstein_hi_ascent * expected;
}

}  // namespace boxtraj

#endif  // BOXTRAJ_SOLVER_LINE_SEARCH_HPP_
