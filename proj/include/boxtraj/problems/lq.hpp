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

#ifndef BOXTRAJ_PROBLEMS_LQ_HPP_
#define BOXTRAJ_PROBLEMS_LQ_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "boxtraj/core/problem.hpp"

namespace boxtraj::problems {

struct LqWeights {
  double state = 1.0;
  double control = 0.01;
  double terminal = 100.0;
};

/**
 * Double integrator p' = p + dt v, v' = v + dt u with cost
 * 1/2 |x|^2 + 1/2 0.01 |u|^2 per node and 1/2 100 |x_N|^2 at the end.
 */
inline ShootingProblem make_lq_double_integrator(std::size_t N, double dt,
                                                 std::optional<ControlBounds> bounds,
                                                 const VectorXd& x0, const LqWeights& w = {}) {
  if (N < 1) throw ConfigError("lq: horizon must be at least one node");
  if (!(dt > 0.0)) throw ConfigError("lq: dt must be positive");
  MatrixXd A(2, 2);
  A << 1.0, dt, 0.0, 1.0;
  MatrixXd B(2, 1);
  B << 0.0, dt;
  auto dynamics = std::make_shared<LinearDynamics>(A, B);
  auto running = std::make_shared<QuadraticCost>(w.state * MatrixXd::Identity(2, 2),
                                                 VectorXd::Zero(2),
                                                 w.control * MatrixXd::Identity(1, 1),
                                                 VectorXd::Zero(1));
  auto terminal = QuadraticCost::terminal(w.terminal * MatrixXd::Identity(2, 2), VectorXd::Zero(2));
  std::vector<ShootingNode> nodes(N, ShootingNode{dynamics, running});
  return ShootingProblem(x0, std::move(nodes), terminal, std::move(bounds));
}

}  // namespace boxtraj::problems

#endif  // BOXTRAJ_PROBLEMS_LQ_HPP_
