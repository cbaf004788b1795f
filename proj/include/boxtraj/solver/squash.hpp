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

#ifndef BOXTRAJ_SOLVER_SQUASH_HPP_
#define BOXTRAJ_SOLVER_SQUASH_HPP_

#include <cmath>

#include "boxtraj/core/errors.hpp"
#include "boxtraj/core/problem.hpp"

namespace boxtraj {

namespace detail {

inline void check_squash_args(const ControlBounds& bounds, double beta, Index n) {
  if (!bounds.all_finite()) throw SquashError("squashing requires finite bounds");
  if (!(beta > 0.0)) throw SquashError("squashing smoothness beta must be positive");
  if (bounds.size() != n) throw DimensionError("squash: control and bounds sizes differ");
}

}  // namespace detail

/**
 * Elementwise smooth saturation built from two smooth-abs functions:
 *
 *   s(u) = 1/2 (lo + sqrt(b^2 + (u - lo)^2)) + 1/2 (hi - sqrt(b^2 + (u - hi)^2))
 *
 * s tends to lo as u -> -inf and to hi as u -> +inf, and stays strictly inside (lo, hi).
 */
inline VectorXd squash(const ConstVectorRef& u, const ControlBounds& bounds, double beta) {
  detail::check_squash_args(bounds, beta, u.size());
  const auto& lo = bounds.lower().array();
  const auto& hi = bounds.upper().array();
  const double b2 = beta * beta;
  const auto ua = u.array();
  return 0.5 * (lo + (b2 + (ua - lo).square()).sqrt()) + 0.5 * (hi - (b2 + (ua - hi).square()).sqrt());
}

/// Diagonal of ds/du.
inline VectorXd squash_jacobian(const ConstVectorRef& u, const ControlBounds& bounds, double beta) {
  detail::check_squash_args(bounds, beta, u.size());
  const auto& lo = bounds.lower().array();
  const auto& hi = bounds.upper().array();
  const double b2 = beta * beta;
  const auto ua = u.array();
  return 0.5 * ((ua - lo) / (b2 + (ua - lo).square()).sqrt() -
                (ua - hi) / (b2 + (ua - hi).square()).sqrt());
}

/// Diagonal of d2s/du2.
inline VectorXd squash_hessian(const ConstVectorRef& u, const ControlBounds& bounds, double beta) {
  detail::check_squash_args(bounds, beta, u.size());
  const auto& lo = bounds.lower().array();
  const auto& hi = bounds.upper().array();
  const double b2 = beta * beta;
  const auto ua = u.array();
  return 0.5 * b2 * ((b2 + (ua - lo).square()).pow(-1.5) - (b2 + (ua - hi).square()).pow(-1.5));
}

}  // namespace boxtraj

#endif  // BOXTRAJ_SOLVER_SQUASH_HPP_
