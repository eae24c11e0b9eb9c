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

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cxcomp/flow.hpp"
#include "cxcomp/types.hpp"

namespace cxcomp {

/// y' = f(t, y) with complex time and state. The right-hand side must be
/// holomorphic in t and y so that complex substeps make sense.
struct OdeSystem {
  int dimension = 0;
  std::function<CVector(Complex t, const CVector& y)> rhs;
  /// df/dy; when empty a central-difference approximation is used.
  std::function<CMatrix(Complex t, const CVector& y)> jacobian;
};

struct NewtonSettings {
  double tolerance = 1e-12;  ///< relative: ||r||_inf < tol * (1 + ||y+||_inf)
  int max_iterations = 25;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
};

/// Central differences with perturbation sqrt(eps) * (1 + |y_j|) along the real axis.
[[nodiscard]] CMatrix finite_difference_jacobian(const OdeSystem& system, Complex t, const CVector& y);

/// Solves y+ = y + h f(t + h, y+) by Newton iteration started from y.
/// Throws StepFailure on stall and LinearSolveError on a singular Newton matrix.
[[nodiscard]] CVector backward_euler_step(const OdeSystem& system, Complex t, const CVector& y, Complex h,
                                          const NewtonSettings& settings = {},
                                          NewtonReport* report = nullptr);

/// k1 = f(t, y), k2 = f(t + h, y + h k1), y+ = y + h/2 (k1 + k2).
[[nodiscard]] CVector heun_step(const OdeSystem& system, Complex t, const CVector& y, Complex h);

/// Backward Euler as a FlowStep (order 1). Counts Newton solves for cost studies.
class BackwardEulerFlow final : public FlowStep {
 public:
  explicit BackwardEulerFlow(OdeSystem system, NewtonSettings settings = {}, std::string label = "BE1");

  CVector advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const override;
  int order() const noexcept override { return 1; }
  std::string label() const override { return label_; }

  [[nodiscard]] std::uint64_t newton_solves() const noexcept { return solves_.load(); }
  [[nodiscard]] std::uint64_t newton_iterations() const noexcept { return iterations_.load(); }
  void reset_counters() const noexcept {
    solves_ = 0;
    iterations_ = 0;
  }

 private:
  OdeSystem system_;
  NewtonSettings settings_;
  std::string label_;
  mutable std::atomic<std::uint64_t> solves_{0};
  mutable std::atomic<std::uint64_t> iterations_{0};
};

/// Explicit Heun (two-stage RK, order 2) as a FlowStep.
class HeunFlow final : public FlowStep {
 public:
  explicit HeunFlow(OdeSystem system, std::string label = "HM1");

  CVector advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const override;
  int order() const noexcept override { return 2; }
  std::string label() const override { return label_; }

 private:
  OdeSystem system_;
  std::string label_;
};

/// Samples of an integration run, including the initial state at index 0.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<RVector> states;
  std::vector<double> invariant_values;
  double wall_clock_seconds = 0.0;
};

using StepObserver = std::function<void(double t, const RVector& y)>;

/// Applies `flow` N times with uniform dt = (t_end - t0) / N without storing the
/// trajectory; the observer sees (t0, y0) and every post-projection state. Returns
/// the final state and, if requested, the wall-clock seconds spent stepping.
[[nodiscard]] RVector propagate(const FlowStep& flow, const RVector& y0, double t0, double t_end, int steps,
                                const StepObserver& observer = {}, double* seconds = nullptr);

/// Applies `flow` N times with uniform dt = (t_end - t0) / N, projecting to the
/// real part after each macro step. Step failures are rethrown as StepFailure
/// carrying the failing step index n (1-based).
[[nodiscard]] TrajectoryRecord integrate(const FlowStep& flow, const RVector& y0, double t0, double t_end,
                                         int steps, const StepObserver& observer = {});

}  // namespace cxcomp
