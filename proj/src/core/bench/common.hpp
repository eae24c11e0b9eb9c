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

#include <filesystem>
#include <fstream>
#include <string>

#include "cxcomp/bench/experiments.hpp"

namespace cxcomp::bench::detail {

/// Report skeleton with the config echo and build metadata.
[[nodiscard]] ExperimentReport new_report(const ExperimentConfig& config);

/// Output directory, created on demand; empty when nothing should be written.
[[nodiscard]] std::filesystem::path output_dir(const ExperimentConfig& config);

/// Opens `dir/name` and writes the versioned header comment.
[[nodiscard]] std::ofstream open_csv(ExperimentReport& report, const std::filesystem::path& dir,
                                     const std::string& name, const std::string& kind);
[[nodiscard]] std::ofstream open_file(ExperimentReport& report, const std::filesystem::path& dir,
                                      const std::string& name);

/// ROC column of every scheme from its own error column; failed cells break the chain.
void fill_roc(ExperimentReport& report);

/// Rate between the finest consecutive successful cells with error above `floor`.
[[nodiscard]] std::optional<double> asymptotic_roc(const ExperimentReport& report, const std::string& scheme,
                                                   double floor, bool temporal = false);

void record_failure(ExperimentReport& report, ReportRow& row, const std::exception& e);

/// File-name friendly scheme label.
[[nodiscard]] std::string file_label(const std::string& scheme);

}  // namespace cxcomp::bench::detail
