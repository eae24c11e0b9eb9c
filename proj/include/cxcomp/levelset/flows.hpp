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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>


#include "cxcomp/flow.hpp"
#include "cxcomp/levelset/assembly.hpp"

namespace cxcomp::levelset {

/// How operators are evaluated inside complex substeps.
enum class TimeEvaluation {
  /// u in K at the complex substep time; SUPG weighting and tau_K frozen at the
  /// real midpoint of the current macro step, so M is constant within it.
  HolomorphicTransport,
  /// Every velocity evaluation at the real part of the substep time.
  RealPart,
};

/// Dirichlet data phi = phi_b on the inflow boundary {u.n < 0}, imposed by dof pinning.
struct InflowCondition {
  std::function<double(double t, const Point2& x)> value;
};

struct LevelSetOptions {
  SupgParameters supg{};
  TimeEvaluation time_evaluation = TimeEvaluation::HolomorphicTransport;
  int assembly_threads = 1;
  std::optional<InflowCondition> inflow;
};

struct LevelSetState {
  CVector dofs;
  Complex t{0.0, 0.0};
};

/// Sparse LU (UMFPACK) of a complex system. Owns a copy of the matrix; solves are
/// serialized, so one factorization can be shared across threads.
class SparseFactorization {
 public:
  /// Throws LinearSolveError when the matrix is singular; `what` names it in messages.
  SparseFactorization(SparseMatrix matrix, std::string what);
  ~SparseFactorization();
  SparseFactorization(const SparseFactorization&) = delete;
  SparseFactorization& operator=(const SparseFactorization&) = delete;

  /// Throws LinearSolveError on failure or a non-finite result.
  [[nodiscard]] CVector solve(const CVector& rhs) const;
  [[nodiscard]] const SparseMatrix& matrix() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

using SparseSolver = SparseFactorization;

/// Semi-discrete system M(t) a' + K(t) a = 0 with cached assemblies and factorizations.
/// Caches are internally synchronized; the problem can be shared across threads.
class LevelSetProblem {
 public:
  LevelSetProblem(std::shared_ptr<const FemSpace> space, VelocityField velocity, LevelSetOptions options = {});
  ~LevelSetProblem();
  LevelSetProblem(const LevelSetProblem&) = delete;
  LevelSetProblem& operator=(const LevelSetProblem&) = delete;

  [[nodiscard]] const FemSpace& space() const noexcept { return *space_; }
  [[nodiscard]] const VelocityField& velocity() const noexcept { return velocity_; }
  [[nodiscard]] const LevelSetOptions& options() const noexcept { return options_; }

  /// Assembly times for an operator evaluation at substep time t inside `macro`.
  [[nodiscard]] AssemblyTimes times_at(Complex t, const MacroStep& macro) const;

  [[nodiscard]] std::shared_ptr<const SparseMatrix> mass(double weighting_time) const;
  [[nodiscard]] std::shared_ptr<const SparseMatrix> transport(const AssemblyTimes& times) const;
  /// Factorization of M(weighting_time).
  [[nodiscard]] std::shared_ptr<const SparseSolver> mass_solver(double weighting_time) const;
  /// Factorization of M(times.weighting_time) + h K(times), inflow rows pinned.
  [[nodiscard]] std::shared_ptr<const SparseSolver> implicit_solver(Complex h, const AssemblyTimes& times) const;

  /// Dofs on the inflow boundary at real time t (empty without an inflow condition).
  [[nodiscard]] std::vector<int> inflow_dofs(double t) const;
  /// Overwrites pinned inflow entries with the boundary data at time t.
  void apply_inflow(CVector& dofs, double t) const;

  [[nodiscard]] std::uint64_t assemblies() const noexcept { return assemblies_.load(); }
  [[nodiscard]] std::uint64_t factorizations() const noexcept { return factorizations_.load(); }

 private:
  struct Caches;
  [[nodiscard]] AssemblyTimes cache_key(const AssemblyTimes& times) const;

  std::shared_ptr<const FemSpace> space_;
  VelocityField velocity_;
  LevelSetOptions options_;
  std::unique_ptr<Caches> caches_;
  mutable std::atomic<std::uint64_t> assemblies_{0};
  mutable std::atomic<std::uint64_t> factorizations_{0};
};

/// a+ = (M(t+h) + h K(t+h))^{-1} M(t) a, one sparse complex solve.
[[nodiscard]] LevelSetState be1_fem_step(const LevelSetProblem& problem, const LevelSetState& state, Complex h,
                                         const MacroStep& macro);

/// a+ = (I - h/2 [M_n^{-1} K_{n-1} + M_n^{-1} K_n (I - h M_n^{-1} K_{n-1})]) a with
/// M_n = M(t+h), K_{n-1} = K(t), K_n = K(t+h); two solves with the M_n factorization.
[[nodiscard]] LevelSetState hm1_fem_step(const LevelSetProblem& problem, const LevelSetState& state, Complex h,
                                         const MacroStep& macro);

class FemBackwardEulerFlow final : public FlowStep {
 public:
  explicit FemBackwardEulerFlow(std::shared_ptr<const LevelSetProblem> problem, std::string label = "BE1");
  CVector advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const override;
  int order() const noexcept override { return 1; }
  std::string label() const override { return label_; }

 private:
  std::shared_ptr<const LevelSetProblem> problem_;
  std::string label_;
};

class FemHeunFlow final : public FlowStep {
 public:
  explicit FemHeunFlow(std::shared_ptr<const LevelSetProblem> problem, std::string label = "HM1");
  CVector advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const override;
  int order() const noexcept override { return 2; }
  std::string label() const override { return label_; }

 private:
  std::shared_ptr<const LevelSetProblem> problem_;
  std::string label_;
};

}  // namespace cxcomp::levelset
