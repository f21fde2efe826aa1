// Copyright 2026 the relu-unwrap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RELUX_COMMON_HPP_
#define RELUX_COMMON_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace relux {

inline constexpr const char* kToolName = "relu-unwrap";
inline constexpr const char* kToolVersion = "0.1.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Base for all structured failures. `module` names the subsystem that
// raised the error so the CLI can emit one parsable diagnostic line.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

// Matrix/vector dimensions do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Serialized artifact is malformed or missing required fields.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// NaN or infinity where a finite value is required.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Input data is empty, unreadable, or violates task constraints.
class DataError : public Error {
 public:
  using Error::Error;
};

// Linear system is rank deficient beyond recovery.
class SingularError : public Error {
 public:
  using Error::Error;
};

// Optimization diverged; carries the epoch where it happened.
class TrainError : public Error {
 public:
  TrainError(std::string module, const std::string& message, int epoch)
      : Error(std::move(module), message), epoch_(epoch) {}

  int epoch() const { return epoch_; }

 private:
  int epoch_ = -1;
};

// Bad command line arguments.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace relux

#endif  // RELUX_COMMON_HPP_
