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
#include <utility>
#include <vector>

#include "cxcomp/bench/config.hpp"
#include "cxcomp/types.hpp"

namespace cxcomp::bench {

/// One (scheme, dt) cell.
struct ReportRow {
  std::string scheme;
  double dt = 0.0;
  long steps = 0;
  double error = 0.0;
  std::optional<double> roc;
  double seconds = 0.0;
  /// Vortex only: distance to the time-converged reference on the same mesh.
  std::optional<double> temporal_error;
  std::optional<double> temporal_roc;
  bool ok = true;
  std::string message;
};

struct CoefficientRow {
  int base_order = 0;
  int branch = 0;
  Complex a1;
  Complex a2;
  double sum_residual = 0.0;
  double power_residual = 0.0;
  bool ok = true;
  std::string message;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;  ///< ordered by scheme (config order), then decreasing dt
  std::vector<CoefficientRow> coefficients;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> files;
  int failed_cells = 0;

  [[nodiscard]] std::optional<double> metric(std::string_view name) const;
  /// 0 when every cell succeeded, 2 otherwise.
  [[nodiscard]] int exit_code() const noexcept { return failed_cells == 0 ? 0 : 2; }
  [[nodiscard]] std::vector<const ReportRow*> rows_for(std::string_view scheme) const;
};

/// dt0 adjusted to divide `window` evenly, then halved `levels` times:
/// N_0 = max(1, round(window / dt0)), N_k = 2^k N_0, dt_k = window / N_k.
[[nodiscard]] std::vector<long> step_counts(double window, double dt0, int levels);

/// Wall time needed to reach `target` error, linear in log(error)-log(seconds):
/// interpolated between the bracketing cells, or extrapolated along a least-squares
/// line through the four cells nearest the target. Failed cells are skipped.
[[nodiscard]] std::optional<double> seconds_at_error(std::span<const ReportRow* const> rows, double target);

/// Snapshot times 0, 0.15, 0.25, 0.5, 0.65, 0.85, 0.95 and 1 of the period.
[[nodiscard]] std::vector<double> snapshot_times(double period);

/// Validates the config (ConfigError) and dispatches on its kind. Writes files into
/// config.output_dir when it is non-empty.
[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config);

[[nodiscard]] ExperimentReport emit_coefficients(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_ode_convergence(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_cpu_error(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_vortex_convergence(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_zalesak(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_stability_region(const ExperimentConfig& config);

/// Report rows as CSV with a `# cxcomp <kind> v1` header line.
void write_rows_csv(std::ostream& out, const ExperimentReport& report, bool with_timing = true);
void write_coefficients_csv(std::ostream& out, const ExperimentReport& report);
void write_metrics_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace cxcomp::bench
