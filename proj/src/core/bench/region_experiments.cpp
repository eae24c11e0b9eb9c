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

#include <cmath>
#include <cstdio>

#include "../format.hpp"
#include "common.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/composition.hpp"
#include "cxcomp/errors.hpp"

namespace cxcomp::bench {

ExperimentReport emit_coefficients(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = detail::new_report(config);
  for (const auto& req : config.pairs) {
    CoefficientRow row;
    row.base_order = req.base_order;
    row.branch = req.branch;
    try {
      const CoefficientPair pair = pair_coefficients(req.base_order, req.branch);
      const Complex coeffs[2] = {pair.a1, pair.a2};
      const ConditionResiduals res = validate_conditions(coeffs, req.base_order);
      row.a1 = pair.a1;
      row.a2 = pair.a2;
      row.sum_residual = res.sum;
      row.power_residual = res.power;
    } catch (const Error& e) {
      row.ok = false;
      row.message = e.what();
      ++report.failed_cells;
    }
    report.coefficients.push_back(std::move(row));
  }
  if (const auto dir = detail::output_dir(config); !dir.empty()) {
    auto out = detail::open_file(report, dir, "coefficients.csv");
    write_coefficients_csv(out, report);
  }
  return report;
}

ExperimentReport run_stability_region(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = detail::new_report(config);
  const auto dir = detail::output_dir(config);
  const int res = config.resolution;
  const double dre = (config.re_max - config.re_min) / (res - 1);
  const double dim = (config.im_max - config.im_min) / (res - 1);

  for (const auto& label : config.schemes) {
    const SchemeSpec spec = parse_scheme(label);
    std::ofstream out;
    if (!dir.empty()) {
      out = detail::open_csv(report, dir, "stability_" + detail::file_label(label) + ".csv", "stability");
      out << "re,im,abs_s,in_region,in_intersection\n";
    }
    long in_region = 0;
    long in_intersection = 0;
    long region_only = 0;
    long intersection_only = 0;
    for (int i = 0; i < res; ++i) {
      const double re = config.re_min + dre * i;
      for (int j = 0; j < res; ++j) {
        const double im = config.im_min + dim * j;
        const Complex z(re, im);
        const StabilitySample s = stability_function(spec.base, spec.coefficients, z);
        bool all = true;
        if (spec.coefficients.empty()) {
          all = s.in_region;
        } else {
          for (const Complex& a : spec.coefficients) {
            all = all && std::abs(base_stability(spec.base, a * z)) <= 1.0;
          }
        }
        in_region += s.in_region;
        in_intersection += all;
        region_only += s.in_region && !all;
        intersection_only += all && !s.in_region;
        if (out.is_open()) {
          out << cxcomp::detail::sig17(re) << ',' << cxcomp::detail::sig17(im) << ','
              << (s.bounded ? cxcomp::detail::sci(std::abs(s.value)) : std::string("inf")) << ','
              << int(s.in_region) << ',' << int(all) << '\n';
        }
      }
    }
    report.metrics.emplace_back(label + ".in_region", static_cast<double>(in_region));
    report.metrics.emplace_back(label + ".in_intersection", static_cast<double>(in_intersection));
    report.metrics.emplace_back(label + ".region_only", static_cast<double>(region_only));
    report.metrics.emplace_back(label + ".intersection_only", static_cast<double>(intersection_only));
  }
  if (!dir.empty()) {
    auto metrics = detail::open_file(report, dir, "stability_metrics.csv");
    write_metrics_csv(metrics, report);
  }
  return report;
}

}  // namespace cxcomp::bench
