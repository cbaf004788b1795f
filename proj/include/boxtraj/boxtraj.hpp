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

#ifndef BOXTRAJ_BOXTRAJ_HPP_
#define BOXTRAJ_BOXTRAJ_HPP_

#include "boxtraj/boxqp.hpp"
#include "boxtraj/core/derivative_check.hpp"
#include "boxtraj/core/errors.hpp"
#include "boxtraj/core/models.hpp"
#include "boxtraj/core/problem.hpp"
#include "boxtraj/problems/double_pendulum.hpp"
#include "boxtraj/problems/lq.hpp"
#include "boxtraj/problems/planar_quadrotor.hpp"
#include "boxtraj/problems/squashed.hpp"
#include "boxtraj/solver/backward_pass.hpp"
#include "boxtraj/solver/forward_pass.hpp"
#include "boxtraj/solver/line_search.hpp"
#include "boxtraj/solver/solver.hpp"
#include "boxtraj/solver/squash.hpp"
#include "boxtraj/solver/types.hpp"

#endif  // BOXTRAJ_BOXTRAJ_HPP_
