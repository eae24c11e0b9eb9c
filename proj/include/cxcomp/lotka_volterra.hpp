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

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cxcomp/ode.hpp"

namespace cxcomp {

/// u' = alpha u - beta u v,  v' = -delta v + gamma u v.
/// Defaults are the benchmark values alpha = delta = 2/3, beta = 4/3, gamma = 1, (u0, v0) = (2, 1).
struct LotkaVolterraParams {
  double alpha = 2.0 / 3.0;
  double beta = 4.0 / 3.0;
  double gamma = 1.0;
  double delta = 2.0 / 3.0;
  double u0 = 2.0;
  double v0 = 1.0;

  /// Throws DomainError unless every field is strictly positive.
  void validate() const;
  [[nodiscard]] RVector initial_state() const;
};

/// Right-hand side with the analytic Jacobian [[alpha - beta v, -beta u], [gamma v, -delta + gamma u]].
[[nodiscard]] OdeSystem lv_system(const LotkaVolterraParams& params);

/// First integral F(u, v) = beta v + gamma u - alpha log v - delta log u.
[[nodiscard]] double lv_invariant(const LotkaVolterraParams& params, double u, double v);

/// (sum_{n>=1} |F0 - F(u_n, v_n)|^2 / sum_{n>=1} |F0|^2)^{1/2} with F0 = F(u0, v0).
/// Sample 0 of the trajectory is the initial state and is excluded.
[[nodiscard]] double relative_invariant_error(const LotkaVolterraParams& params,
                                              const TrajectoryRecord& trajectory);

/// Running form of relative_invariant_error for trajectories that are not stored.
/// Feed every post-step state (not the initial one) to add().
class InvariantErrorAccumulator {
 public:
  explicit InvariantErrorAccumulator(LotkaVolterraParams params);
  /// Throws DomainError naming the sample when a population is non-positive.
  void add(const RVector& state);
  [[nodiscard]] std::size_t samples() const noexcept { return samples_; }
  /// Throws DomainError when no samples were added.
  [[nodiscard]] double value() const;

 private:
  LotkaVolterraParams params_;
  double f0_;
  double num_ = 0.0;
  double den_ = 0.0;
  std::size_t samples_ = 0;
};

/// Orbit period: first return of a fine RK4 trajectory to (u0, v0), refined on the
/// section u = u0. Memoized for the default parameters.
[[nodiscard]] double lv_period(const LotkaVolterraParams& params = {});

/// Rates of convergence log10(e_l / e_{l-1}) / log10(dt_l / dt_{l-1}) for l >= 1.
[[nodiscard]] std::vector<double> roc(std::span<const double> errors, std::span<const double> dts);

struct ConvergenceRow {
  double dt;
  double error;
  std::optional<double> roc;
};

/// Error history of one scheme over a decreasing sequence of step sizes.
struct ConvergenceTable {
  std::string scheme;
  std::vector<ConvergenceRow> rows;

  /// Builds the table and fills the ROC column; dts must be strictly decreasing.
  [[nodiscard]] static ConvergenceTable build(std::string scheme, std::span<const double> dts,
                                              std::span<const double> errors);

  /// Header `dt,error,roc`, 6 significant digits, `--` where the rate is undefined.
  void write_csv(std::ostream& out) const;
};

}  // namespace cxcomp
