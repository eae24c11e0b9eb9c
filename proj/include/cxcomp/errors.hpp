/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cxcomp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Composition branch whose coefficient formula degenerates (1 + cos(angle) ~ 0).
class SingularBranchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class LinearSolveError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A time step that could not be completed (Newton stall, non-finite state, failed solve).
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double last_residual, std::ptrdiff_t step_index = -1)
      : Error(what), last_residual_(last_residual), step_index_(step_index) {}

  [[nodiscard]] double last_residual() const noexcept { return last_residual_; }
  /// Index n of the failing macro step, or -1 when raised outside a driver loop.
  [[nodiscard]] std::ptrdiff_t step_index() const noexcept { return step_index_; }

 private:
  double last_residual_;
  std::ptrdiff_t step_index_;
};

}  // namespace cxcomp
