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

#ifndef BOXTRAJ_BOXQP_HPP_
#define BOXTRAJ_BOXQP_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "boxtraj/core/errors.hpp"

namespace boxtraj {

struct BoxQPSettings {
  int max_iter = 100;
  double grad_tol = 1e-9;   // infinity norm of the free-subspace gradient
  double armijo_c = 0.1;
  double step_shrink = 0.5;
  int max_backtracks = 20;
};

/// min 1/2 x'Hx + q'x  s.t.  lower <= x <= upper
struct BoxQPProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd q;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd x0;  // warm start; clamped before use, empty means zero
};

struct BoxQPResult {
  Eigen::VectorXd x_star;
  std::vector<Eigen::Index> free_set;
  std::vector<Eigen::Index> clamped_set;
  /// Cholesky factor of H restricted to free_set x free_set.
  Eigen::LLT<Eigen::MatrixXd> free_factorization;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;

  /// Solves H_ff y = rhs for the free block (rhs sized |free_set|).
  Eigen::MatrixXd solve_free(const Eigen::MatrixXd& rhs) const { return free_factorization.solve(rhs); }
};

namespace detail {

inline double boxqp_objective(const Eigen::MatrixXd& H, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& x) {
  return 0.5 * x.dot(H * x) + q.dot(x);
}

inline Eigen::MatrixXd select(const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& rows,
                              const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
  }
  return out;
}

inline Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

}  // namespace detail

/**
 * Projected-Newton solver for strictly convex box-constrained QPs.
 *
 * Each iteration classifies a coordinate as clamped when it sits on a bound and the
 * gradient points out of the box across that bound, takes a Newton step on the remaining
 * free coordinates, and backtracks along the projected path (Armijo). The factorization
 * of the free Hessian block that matches the returned free set is kept for the caller.
 *
 * Throws FactorizationError when H is not positive definite on the free subspace.
 */
inline BoxQPResult solve_boxqp(const BoxQPProblem& p, const BoxQPSettings& settings = {}) {
  using Eigen::Index;
  const Index n = p.q.size();
  if (p.H.rows() != n || p.H.cols() != n || p.lower.size() != n || p.upper.size() != n ||
      (p.x0.size() != 0 && p.x0.size() != n)) {
    throw DimensionError("solve_boxqp: inconsistent problem dimensions");
  }
  if ((p.lower.array() > p.upper.array()).any()) {
    throw ConfigError("solve_boxqp: lower bound exceeds upper bound");
  }

  BoxQPResult res;
  if (n == 0) {
    res.x_star.resize(0);
    res.converged = true;
    return res;
  }

  Eigen::VectorXd x = p.x0.size() == n ? p.x0 : Eigen::VectorXd::Zero(n);
  x = x.cwiseMax(p.lower).cwiseMin(p.upper);
  double value = detail::boxqp_objective(p.H, p.q, x);
  res.objective_history.push_back(value);

  std::vector<bool> clamped(n, false);
  std::vector<Index> free_set;
  std::vector<Index> clamped_set;
  bool factorized = false;

  for (;;) {
    const Eigen::VectorXd grad = p.q + p.H * x;

    std::vector<bool> now_clamped(n, false);
    free_set.clear();
    clamped_set.clear();
    for (Index i = 0; i < n; ++i) {
      // x is exactly on a bound after projection; both-infinite coordinates never match.
      const bool at_lower = x[i] == p.lower[i] && grad[i] > 0.0;
      const bool at_upper = x[i] == p.upper[i] && grad[i] < 0.0;
      now_clamped[i] = at_lower || at_upper;
      (now_clamped[i] ? clamped_set : free_set).push_back(i);
    }

    if (free_set.empty()) {
      res.free_factorization = Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(0, 0));
      res.converged = true;
      break;
    }

    if (!factorized || now_clamped != clamped) {
      res.free_factorization.compute(detail::select(p.H, free_set, free_set));
      if (res.free_factorization.info() != Eigen::Success) {
        throw FactorizationError("solve_boxqp: Hessian is not positive definite on the free set");
      }
      factorized = true;
    }
    clamped = now_clamped;

    if (detail::select(grad, free_set).cwiseAbs().maxCoeff() < settings.grad_tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= settings.max_iter) break;

    // Newton step on the free coordinates with the clamped ones held fixed.
    Eigen::VectorXd x_clamped = Eigen::VectorXd::Zero(n);
    for (Index i : clamped_set) x_clamped[i] = x[i];
    const Eigen::VectorXd grad_clamped = p.q + p.H * x_clamped;
    const Eigen::VectorXd newton =
        -res.free_factorization.solve(detail::select(grad_clamped, free_set));
    Eigen::VectorXd search = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < free_set.size(); ++j) {
      search[free_set[j]] = newton[j] - x[free_set[j]];
    }

    const double slope = search.dot(grad);
    if (!(slope < 0.0)) break;  // no descent left at working precision

    double step = 1.0;
    int backtracks = 0;
    Eigen::VectorXd candidate;
    double candidate_value = 0.0;
    bool accepted = false;
    for (;;) {
      candidate = (x + step * search).cwiseMax(p.lower).cwiseMin(p.upper);
      candidate_value = detail::boxqp_objective(p.H, p.q, candidate);
      if (candidate_value - value <= settings.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      if (++backtracks > settings.max_backtracks) break;
      step *= settings.step_shrink;
    }
    if (!accepted) break;

    x = candidate;
    value = candidate_value;
    res.objective_history.push_back(value);
    ++res.iterations;
  }

  res.x_star = x;
  res.free_set = std::move(free_set);
  res.clamped_set = std::move(clamped_set);
  return res;
}

}  // namespace boxtraj

#endif  // BOXTRAJ_BOXQP_HPP_
