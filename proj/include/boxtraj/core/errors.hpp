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

#ifndef BOXTRAJ_CORE_ERRORS_HPP_
#define BOXTRAJ_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace boxtraj {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes disagree with what a problem node declares.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A dynamics or cost callback failed or produced non-finite output.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization of a (sub-)Hessian failed.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

class BackwardPassError : public Error {
 public:
  using Error::Error;
};

class ForwardPassError : public Error {
 public:
  using Error::Error;
};

/// Squashing requires finite bounds on every control coordinate.
class SquashError : public Error {
 public:
  using Error::Error;
};

/// Invalid problem or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace boxtraj

#endif  // BOXTRAJ_CORE_ERRORS_HPP_
