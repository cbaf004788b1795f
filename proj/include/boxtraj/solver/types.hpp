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

#ifndef BOXTRAJ_SOLVER_TYPES_HPP_
#define BOXTRAJ_SOLVER_TYPES_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boxtraj/boxqp.hpp"
#include "boxtraj/core/errors.hpp"
#include "boxtraj/core/problem.hpp"

namespace boxtraj {

enum class SolverVariant { Ddp, Fddp, BoxDdp, BoxFddp };

inline bool is_bounded(SolverVariant v) {
  return v == SolverVariant::BoxDdp || v == SolverVariant::BoxFddp;
}

/// Variants that always keep a dynamically feasible iterate.
inline bool is_single_shooting(SolverVariant v) {
  return v == SolverVariant::Ddp || v == SolverVariant::BoxDdp;
}

inline std::string_view to_string(SolverVariant v) {
  switch (v) {
    case SolverVariant::Ddp: return "ddp";
    case SolverVariant::Fddp: return "fddp";
    case SolverVariant::BoxDdp: return "box-ddp";
    case SolverVariant::BoxFddp: return "box-fddp";
  }
  return "unknown";
}

inline SolverVariant variant_from_string(std::string_view name) {
  if (name == "ddp") return SolverVariant::Ddp;
  if (name == "fddp") return SolverVariant::Fddp;
  if (name == "box-ddp") return SolverVariant::BoxDdp;
  if (name == "box-fddp") return SolverVariant::BoxFddp;
  throw ConfigError("unknown solver variant '" + std::string(name) + "'");
}

struct SolverSettings {
  double reg_init = 1e-9;
  double reg_factor = 10.0;
  double reg_min = 1e-9;
  double reg_max = 1e9;
  int alpha_halvings = 10;        // alpha in {1, 1/2, ..., 1/2^n}
  double alpha_big_step = 0.5;    // steps with alpha >= this decrease the regularization
  double goldstein_lo = 0.1;
  double goldstein_hi_ascent = 2.0;
  double stop_tol = 1e-9;
  double gap_tol = 1e-9;
  int max_iter = 500;
  BoxQPSettings boxqp{};

  void validate() const {
    if (!(reg_min <= reg_init && reg_init <= reg_max)) {
      throw ConfigError("regularization must satisfy reg_min <= reg_init <= reg_max");
    }
    if (!(goldstein_lo > 0.0 && goldstein_lo < 1.0)) {
      throw ConfigError("goldstein_lo must lie in (0, 1)");
    }
    if (reg_factor <= 1.0) throw ConfigError("reg_factor must exceed 1");
    if (alpha_halvings < 0) throw ConfigError("alpha_halvings must be non-negative");
    if (max_iter < 0) throw ConfigError("max_iter must be non-negative");
  }
};

/// Active-set data of the feed-forward box QP at one node.
struct BoxQPNodeData {
  std::vector<Index> free_set;
  std::vector<Index> clamped_set;
  Eigen::LLT<MatrixXd> free_factorization;
};

struct Policy {
  std::vector<VectorXd> k;  // feed-forward
  std::vector<MatrixXd> K;  // feedback, control_dim x state_dim
  std::optional<std::vector<BoxQPNodeData>> boxqp_data;

  std::size_t horizon() const { return k.size(); }
};

/// Direction parts of the expected-improvement model dJ(a) = delta1 a + 1/2 delta2 a^2.
struct ExpectedImprovement {
  double delta1 = 0.0;
  double delta2 = 0.0;

  double at(double alpha) const { return delta1 * alpha + 0.5 * delta2 * alpha * alpha; }
};

struct IterationRecord {
  int iter = 0;
  double cost = 0.0;
  double gap_inf_norm = 0.0;
  double step_length = 0.0;
  double regularization = 0.0;
  bool feasible = false;
  double expected_dJ = 0.0;
  double actual_dJ = 0.0;
};

/// One record per accepted iteration.
class SolverLog {
 public:
  void append(const IterationRecord& r) { records_.push_back(r); }
  const std::vector<IterationRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<IterationRecord> records_;
};

struct Solution {
  Trajectory trajectory;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  SolverLog log;
};

}  // namespace boxtraj

#endif  // BOXTRAJ_SOLVER_TYPES_HPP_
