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

#ifndef BOXTRAJ_CORE_MODELS_HPP_
#define BOXTRAJ_CORE_MODELS_HPP_

#include <Eigen/Core>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "boxtraj/core/errors.hpp"

namespace boxtraj {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstVectorRef = Eigen::Ref<const VectorXd>;

/// First and second derivatives of a stage cost l(x, u).
struct CostDerivatives {
  VectorXd lx;
  VectorXd lu;
  MatrixXd lxx;
  MatrixXd lxu;
  MatrixXd luu;

  void resize(Index nx, Index nu) {
    lx.setZero(nx);
    lu.setZero(nu);
    lxx.setZero(nx, nx);
    lxu.setZero(nx, nu);
    luu.setZero(nu, nu);
  }
};

/**
 * Discrete-time dynamics x' = f(x, u).
 *
 * Implementations must be stateless: evaluation is const and may run
 * concurrently from several threads.
 */
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual Index state_dim() const = 0;
  virtual Index control_dim() const = 0;
  virtual Index next_state_dim() const { return state_dim(); }

  virtual VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const = 0;

  /// Writes the Jacobians df/dx (nx' x nx) and df/du (nx' x nu).
  virtual void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u, MatrixXd& fx,
                         MatrixXd& fu) const = 0;
};

/// Stage cost l(x, u). Terminal costs use control_dim() == 0.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual Index state_dim() const = 0;
  virtual Index control_dim() const = 0;

  virtual double calc(const ConstVectorRef& x, const ConstVectorRef& u) const = 0;
  virtual void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u,
                         CostDerivatives& out) const = 0;
};

using DynamicsPtr = std::shared_ptr<const DynamicsModel>;
using CostPtr = std::shared_ptr<const CostModel>;

/// x' = A x + B u + c
class LinearDynamics final : public DynamicsModel {
 public:
  LinearDynamics(MatrixXd A, MatrixXd B, VectorXd c)
      : A_(std::move(A)), B_(std::move(B)), c_(std::move(c)) {
    if (A_.rows() != B_.rows() || A_.rows() != c_.size()) {
      throw DimensionError("LinearDynamics: A, B and c must have the same number of rows");
    }
  }
  LinearDynamics(MatrixXd A, MatrixXd B)
      : LinearDynamics(A, B, VectorXd::Zero(A.rows())) {}

  Index state_dim() const override { return A_.cols(); }
  Index control_dim() const override { return B_.cols(); }
  Index next_state_dim() const override { return A_.rows(); }

  VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    return A_ * x + B_ * u + c_;
  }

  void calc_diff(const ConstVectorRef&, const ConstVectorRef&, MatrixXd& fx,
                 MatrixXd& fu) const override {
    fx = A_;
    fu = B_;
  }

  const MatrixXd& A() const { return A_; }
  const MatrixXd& B() const { return B_; }

 private:
  MatrixXd A_;
  MatrixXd B_;
  VectorXd c_;
};

/// l = 1/2 (x - xr)' Q (x - xr) + 1/2 (u - ur)' R (u - ur)
class QuadraticCost final : public CostModel {
 public:
  QuadraticCost(MatrixXd Q, VectorXd x_ref, MatrixXd R, VectorXd u_ref)
      : Q_(std::move(Q)), R_(std::move(R)), x_ref_(std::move(x_ref)), u_ref_(std::move(u_ref)) {
    if (Q_.rows() != Q_.cols() || Q_.rows() != x_ref_.size() || R_.rows() != R_.cols() ||
        R_.rows() != u_ref_.size()) {
      throw DimensionError("QuadraticCost: inconsistent weight/reference sizes");
    }
  }

  /// Cost on the state only, for terminal nodes.
  static std::shared_ptr<QuadraticCost> terminal(MatrixXd Q, VectorXd x_ref) {
    return std::make_shared<QuadraticCost>(std::move(Q), std::move(x_ref), MatrixXd(0, 0),
                                           VectorXd(0));
  }

  Index state_dim() const override { return Q_.rows(); }
  Index control_dim() const override { return R_.rows(); }

  double calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    const VectorXd dx = x - x_ref_;
    const VectorXd du = u - u_ref_;
    return 0.5 * dx.dot(Q_ * dx) + 0.5 * du.dot(R_ * du);
  }

  void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u,
                 CostDerivatives& out) const override {
    out.resize(state_dim(), control_dim());
    out.lx = Q_ * (x - x_ref_);
    out.lu = R_ * (u - u_ref_);
    out.lxx = Q_;
    out.luu = R_;
  }

 private:
  MatrixXd Q_;
  MatrixXd R_;
  VectorXd x_ref_;
  VectorXd u_ref_;
};

/// Weighted sum of cost terms sharing the same state/control sizes.
class SumCost final : public CostModel {
 public:
  SumCost(Index nx, Index nu) : nx_(nx), nu_(nu) {}

  SumCost& add(CostPtr term, double weight = 1.0) {
    if (term->state_dim() != nx_ || term->control_dim() != nu_) {
      throw DimensionError("SumCost: term dimensions do not match the sum");
    }
    terms_.emplace_back(std::move(term), weight);
    return *this;
  }

  Index state_dim() const override { return nx_; }
  Index control_dim() const override { return nu_; }

  double calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    double total = 0.0;
    for (const auto& [term, weight] : terms_) total += weight * term->calc(x, u);
    return total;
  }

  void calc_diff(const ConstVectorRef& x, const ConstVectorRef& u,
                 CostDerivatives& out) const override {
    out.resize(nx_, nu_);
    CostDerivatives part;
    for (const auto& [term, weight] : terms_) {
      term->calc_diff(x, u, part);
      out.lx += weight * part.lx;
      out.lu += weight * part.lu;
      out.lxx += weight * part.lxx;
      out.lxu += weight * part.lxu;
      out.luu += weight * part.luu;
    }
  }

  std::size_t size() const { return terms_.size(); }

 private:
  Index nx_;
  Index nu_;
  std::vector<std::pair<CostPtr, double>> terms_;
};

/// Cost that is identically zero.
class ZeroCost final : public CostModel {
 public:
  ZeroCost(Index nx, Index nu) : nx_(nx), nu_(nu) {}
  Index state_dim() const override { return nx_; }
  Index control_dim() const override { return nu_; }
  double calc(const ConstVectorRef&, const ConstVectorRef&) const override { return 0.0; }
  void calc_diff(const ConstVectorRef&, const ConstVectorRef&,
                 CostDerivatives& out) const override {
    out.resize(nx_, nu_);
  }

 private:
  Index nx_;
  Index nu_;
};

}  // namespace boxtraj

#endif  // BOXTRAJ_CORE_MODELS_HPP_
