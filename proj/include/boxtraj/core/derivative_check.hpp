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

#ifndef BOXTRAJ_CORE_DERIVATIVE_CHECK_HPP_
#define BOXTRAJ_CORE_DERIVATIVE_CHECK_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>

#include "boxtraj/core/errors.hpp"
#include "boxtraj/core/models.hpp"
#include "boxtraj/core/problem.hpp"

namespace boxtraj {

/// Per-block maximum relative error of analytic derivatives against central differences.
struct DerivativeReport {
  std::map<std::string, double> max_rel_error;

  double worst() const {
    double w = 0.0;
    for (const auto& [name, err] : max_rel_error) w = std::max(w, err);
    return w;
  }

  void merge(const DerivativeReport& other) {
    for (const auto& [name, err] : other.max_rel_error) {
      auto& slot = max_rel_error[name];
      slot = std::max(slot, err);
    }
  }
};

namespace detail {

// ||analytic - numeric||_inf / max(1, ||analytic||_inf)
inline double relative_error(const MatrixXd& analytic, const MatrixXd& numeric) {
  if (analytic.size() == 0) return 0.0;
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

template <typename Fn>
MatrixXd central_jacobian(Fn&& fn, const VectorXd& at, Index rows, double eps) {
  MatrixXd J(rows, at.size());
  VectorXd p = at;
  for (Index j = 0; j < at.size(); ++j) {
    const double hi = at[j] + eps;
    const double lo = at[j] - eps;
    p[j] = hi;
    const VectorXd plus = fn(p);
    p[j] = lo;
    const VectorXd minus = fn(p);
    p[j] = at[j];
    // divide by the step actually taken in floating point
    J.col(j) = (plus - minus) / (hi - lo);
  }
  return J;
}

inline void require_positive_eps(double eps) {
  if (!(eps > 0.0)) throw ConfigError("finite-difference step must be positive");
}

}  // namespace detail

/// Checks fx and fu of a dynamics model at (x, u).
inline DerivativeReport check_derivatives(const DynamicsModel& model, const VectorXd& x,
                                          const VectorXd& u, double eps = 1e-6) {
  detail::require_positive_eps(eps);
  MatrixXd fx, fu;
  model.calc_diff(x, u, fx, fu);
  const Index rows = model.next_state_dim();
  const MatrixXd fx_fd = detail::central_jacobian(
      [&](const VectorXd& xp) { return model.calc(xp, u); }, x, rows, eps);
  const MatrixXd fu_fd = detail::central_jacobian(
      [&](const VectorXd& up) { return model.calc(x, up); }, u, rows, eps);
  DerivativeReport r;
  r.max_rel_error["fx"] = detail::relative_error(fx, fx_fd);
  r.max_rel_error["fu"] = detail::relative_error(fu, fu_fd);
  return r;
}

/**
 * Checks a cost model at (x, u). Gradients are compared with central differences of the
 * cost value; Hessian blocks with central differences of the analytic gradient.
 */
inline DerivativeReport check_derivatives(const CostModel& model, const VectorXd& x,
                                          const VectorXd& u, double eps = 1e-6) {
  detail::require_positive_eps(eps);
  CostDerivatives d;
  model.calc_diff(x, u, d);
  const Index nx = x.size();
  const Index nu = u.size();

  auto value_x = [&](const VectorXd& xp) { return VectorXd::Constant(1, model.calc(xp, u)); };
  auto value_u = [&](const VectorXd& up) { return VectorXd::Constant(1, model.calc(x, up)); };
  auto grad_x_at_x = [&](const VectorXd& xp) {
    CostDerivatives t;
    model.calc_diff(xp, u, t);
    return VectorXd(t.lx);
  };
  auto grad_x_at_u = [&](const VectorXd& up) {
    CostDerivatives t;
    model.calc_diff(x, up, t);
    return VectorXd(t.lx);
  };
  auto grad_u_at_u = [&](const VectorXd& up) {
    CostDerivatives t;
    model.calc_diff(x, up, t);
    return VectorXd(t.lu);
  };

  DerivativeReport r;
  const MatrixXd lx_fd = detail::central_jacobian(value_x, x, 1, eps).transpose();
  r.max_rel_error["lx"] = detail::relative_error(d.lx, lx_fd);
  r.max_rel_error["lxx"] =
      detail::relative_error(d.lxx, detail::central_jacobian(grad_x_at_x, x, nx, eps));
  if (nu > 0) {
    const MatrixXd lu_fd = detail::central_jacobian(value_u, u, 1, eps).transpose();
    r.max_rel_error["lu"] = detail::relative_error(d.lu, lu_fd);
    r.max_rel_error["lxu"] =
        detail::relative_error(d.lxu, detail::central_jacobian(grad_x_at_u, u, nx, eps));
    r.max_rel_error["luu"] =
        detail::relative_error(d.luu, detail::central_jacobian(grad_u_at_u, u, nu, eps));
  }
  return r;
}

/**
 * Checks every distinct model of a problem at `points` seeded random points. States are drawn
 * from [-2, 2]; controls from the declared bounds where finite and [-3, 3] otherwise.
 */
inline DerivativeReport check_problem_derivatives(const ShootingProblem& problem, std::uint64_t seed,
                                                  int points = 50, double eps = 1e-6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& bounds = problem.bounds();
  auto draw_x = [&](Index n) {
    VectorXd x(n);
    for (Index i = 0; i < n; ++i) x[i] = -2.0 + 4.0 * unit(rng);
    return x;
  };
  auto draw_u = [&](Index n) {
    VectorXd u(n);
    for (Index i = 0; i < n; ++i) {
      double lo = -3.0;
      double hi = 3.0;
      if (bounds && bounds->size() == n) {
        if (std::isfinite(bounds->lower()[i])) lo = bounds->lower()[i];
        if (std::isfinite(bounds->upper()[i])) hi = bounds->upper()[i];
      }
      u[i] = lo + (hi - lo) * unit(rng);
    }
    return u;
  };

  DerivativeReport report;
  std::set<const void*> seen;
  for (const auto& node : problem.nodes()) {
    if (seen.insert(node.dynamics.get()).second) {
      for (int i = 0; i < points; ++i) {
        const VectorXd x = draw_x(node.dynamics->state_dim());
        report.merge(check_derivatives(*node.dynamics, x, draw_u(node.dynamics->control_dim()), eps));
      }
    }
    if (seen.insert(node.cost.get()).second) {
      for (int i = 0; i < points; ++i) {
        const VectorXd x = draw_x(node.cost->state_dim());
        report.merge(check_derivatives(*node.cost, x, draw_u(node.cost->control_dim()), eps));
      }
    }
  }
  const auto& terminal = *problem.terminal_cost();
  for (int i = 0; i < points; ++i) {
    report.merge(check_derivatives(terminal, draw_x(terminal.state_dim()), VectorXd(0), eps));
  }
  return report;
}

}  // namespace boxtraj

#endif  // BOXTRAJ_CORE_DERIVATIVE_CHECK_HPP_
