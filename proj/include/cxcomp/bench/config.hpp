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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cxcomp::bench {

enum class ExperimentKind { Coeffs, OdeConverge, OdeCpu, VortexConverge, Zalesak, StabilityRegion };

/// CLI-style name: coeffs, ode-converge, ode-cpu, vortex, zalesak, stability.
[[nodiscard]] std::string kind_name(ExperimentKind kind);
/// Accepts the CLI names plus vortex-converge and stability-region. Throws ConfigError.
[[nodiscard]] ExperimentKind parse_kind(std::string_view name);

struct BranchRequest {
  int base_order;
  int branch;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::OdeConverge;
  std::vector<std::string> schemes;
  double dt0 = 0.2;
  int levels = 7;        ///< number of halvings after dt0
  int mesh_n = 64;
  double period = 0.0;   ///< 0 selects the Lotka-Volterra orbit period for ODE runs
  double supg_c = 0.5;
  double supg_tol = 1e-10;
  std::string output_dir;
  std::uint64_t seed = 0;  ///< reserved, unused by the numerics

  int repeats = 3;
  double target_error = 1e-6;
  std::vector<BranchRequest> pairs;
  double re_min = -6.0;
  double re_max = 2.0;
  double im_min = -4.0;
  double im_max = 4.0;
  int resolution = 200;
  std::string reference_scheme = "BE4";
  double reference_dt = 2.5e-3;
  bool snapshots = true;
  int threads = 1;

  /// Throws ConfigError on non-positive sizes, unknown schemes or an empty window.
  void validate() const;
};

/// Defaults for each experiment.
[[nodiscard]] ExperimentConfig default_config(ExperimentKind kind);

/// Sets one field from its textual form, e.g. ("dt0", "0.1"). Throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines; `#` starts a comment. A `kind` line must agree with config.kind.
void apply_config_text(ExperimentConfig& config, std::string_view text);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Round-trippable key-value echo of every field.
[[nodiscard]] std::string to_text(const ExperimentConfig& config);

}  // namespace cxcomp::bench
