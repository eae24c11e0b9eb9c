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

#include <algorithm>
#include <memory>

#include "../format.hpp"
#include "common.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/errors.hpp"
#include "cxcomp/lotka_volterra.hpp"

namespace cxcomp::bench {

namespace {

// Cells whose error sits at the roundoff floor are left out of the asymptotic rate.
constexpr double kOdeErrorFloor = 1e-11;

struct LvScheme {
  FlowPtr flow;
  std::shared_ptr<const BackwardEulerFlow> newton;  ///< null for explicit bases
};

LvScheme make_lv_scheme(const std::string& label, const LotkaVolterraParams& params) {
  const SchemeSpec spec = parse_scheme(label);
  LvScheme s;
  if (spec.base == BaseScheme::BackwardEuler) {
    s.newton = std::make_shared<const BackwardEulerFlow>(lv_system(params));
    s.flow = make_flow(spec, s.newton);
  } else {
    s.flow = make_flow(spec, std::make_shared<const HeunFlow>(lv_system(params)));
  }
  return s;
}

double invariant_error(const FlowStep& flow, const LotkaVolterraParams& params, double window, long steps,
                       double* seconds) {
  InvariantErrorAccumulator acc(params);
  bool initial = true;
  (void)propagate(
      flow, params.initial_state(), 0.0, window, static_cast<int>(steps),
      [&](double, const RVector& y) {
        if (initial) {
          initial = false;
          return;
        }
        acc.add(y);
      },
      seconds);
  return acc.value();
}

double window_of(const ExperimentConfig& config, const LotkaVolterraParams& params) {
  return config.period > 0.0 ? config.period : lv_period(params);
}

}  // namespace

ExperimentReport run_ode_convergence(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = detail::new_report(config);
  const LotkaVolterraParams params;
  const double window = window_of(config, params);
  const auto counts = step_counts(window, config.dt0, config.levels);
  report.metrics.emplace_back("window", window);

  for (const auto& label : config.schemes) {
    const LvScheme scheme = make_lv_scheme(label, params);
    for (long n : counts) {
      ReportRow row;
      row.scheme = label;
      row.steps = n;
      row.dt = window / static_cast<double>(n);
      try {
        row.error = invariant_error(*scheme.flow, params, window, n, &row.seconds);
      } catch (const Error& e) {
        detail::record_failure(report, row, e);
      }
      report.rows.push_back(std::move(row));
    }
  }
  detail::fill_roc(report);
  for (const auto& label : config.schemes) {
    if (auto r = detail::asymptotic_roc(report, label, kOdeErrorFloor)) {
      report.metrics.emplace_back(label + ".asymptotic_roc", *r);
    }
  }

  if (const auto dir = detail::output_dir(config); !dir.empty()) {
    for (const auto& label : config.schemes) {
      auto out = detail::open_csv(report, dir, "ode_converge_" + detail::file_label(label) + ".csv",
                                  "ode-converge");
      out << "dt,error,roc\n";
      for (const ReportRow* r : report.rows_for(label)) {
        out << cxcomp::detail::sci(r->dt) << ',' << (r->ok ? cxcomp::detail::sci(r->error) : "nan") << ',';
        if (r->roc) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.6g", *r->roc);
          out << buf;
        } else {
          out << "--";
        }
        out << '\n';
      }
    }
    // Table layout: one line per dt, error and rate columns per scheme.
    auto table = detail::open_csv(report, dir, "ode_converge_table.csv", "ode-converge-table");
    table << "dt";
    for (const auto& label : config.schemes) {
      table << ',' << label << "_error," << label << "_roc";
    }
    table << '\n';
    for (std::size_t k = 0; k < counts.size(); ++k) {
      table << cxcomp::detail::sci(window / static_cast<double>(counts[k]));
      for (const auto& label : config.schemes) {
        const ReportRow& r = *report.rows_for(label)[k];
        table << ',' << (r.ok ? cxcomp::detail::sci(r.error) : "nan") << ',';
        if (r.roc) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.4f", *r.roc);
          table << buf;
        } else {
          table << "--";
        }
      }
      table << '\n';
    }
    auto out = detail::open_file(report, dir, "ode_converge.csv");
    write_rows_csv(out, report, false);
  }
  return report;
}

ExperimentReport run_cpu_error(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = detail::new_report(config);
  const LotkaVolterraParams params;
  const double window = window_of(config, params);
  const auto counts = step_counts(window, config.dt0, config.levels);
  report.metrics.emplace_back("window", window);

  for (const auto& label : config.schemes) {
    const LvScheme scheme = make_lv_scheme(label, params);
    bool counted = false;
    for (long n : counts) {
      ReportRow row;
      row.scheme = label;
      row.steps = n;
      row.dt = window / static_cast<double>(n);
      try {
        double unused = 0.0;
        row.error = invariant_error(*scheme.flow, params, window, n, &unused);
        // Timed repeats without the invariant observer.
        std::vector<double> times;
        for (int rep = 0; rep < config.repeats; ++rep) {
          if (scheme.newton) {
            scheme.newton->reset_counters();
          }
          double secs = 0.0;
          (void)propagate(*scheme.flow, params.initial_state(), 0.0, window, static_cast<int>(n), {}, &secs);
          times.push_back(secs);
        }
        std::sort(times.begin(), times.end());
        row.seconds = times[times.size() / 2];
        if (scheme.newton && !counted) {
          counted = true;
          report.metrics.emplace_back(label + ".newton_solves_per_step",
                                      static_cast<double>(scheme.newton->newton_solves()) / static_cast<double>(n));
        }
      } catch (const Error& e) {
        detail::record_failure(report, row, e);
      }
      report.rows.push_back(std::move(row));
    }
  }
  detail::fill_roc(report);
  for (const auto& label : config.schemes) {
    const auto rows = report.rows_for(label);
    if (auto s = seconds_at_error(rows, config.target_error)) {
      report.metrics.emplace_back(label + ".seconds_at_target", *s);
    }
  }

  if (const auto dir = detail::output_dir(config); !dir.empty()) {
    auto out = detail::open_file(report, dir, "ode_cpu.csv");
    write_rows_csv(out, report, true);
    auto metrics = detail::open_file(report, dir, "ode_cpu_metrics.csv");
    write_metrics_csv(metrics, report);
  }
  return report;
}

}  // namespace cxcomp::bench
