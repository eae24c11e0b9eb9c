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
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "../format.hpp"
#include "common.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/errors.hpp"
#include "cxcomp/levelset/diagnostics.hpp"
#include "cxcomp/levelset/flows.hpp"
#include "cxcomp/ode.hpp"

namespace cxcomp::bench {

namespace {

using namespace cxcomp::levelset;

struct FemContext {
  std::shared_ptr<const FemSpace> space;
  std::shared_ptr<const LevelSetProblem> problem;
  FlowPtr be1;
  FlowPtr hm1;

  [[nodiscard]] FlowPtr flow(const std::string& label) const {
    const SchemeSpec spec = parse_scheme(label);
    return make_flow(spec, spec.base == BaseScheme::BackwardEuler ? be1 : hm1);
  }
};

FemContext make_context(const ExperimentConfig& config, VelocityField velocity) {
  FemContext ctx;
  auto mesh = std::make_shared<const TriMesh>(build_structured_mesh(config.mesh_n));
  ctx.space = std::make_shared<const FemSpace>(mesh);
  LevelSetOptions options;
  options.supg = {config.supg_c, config.supg_tol};
  options.assembly_threads = config.threads;
  ctx.problem = std::make_shared<const LevelSetProblem>(ctx.space, std::move(velocity), options);
  ctx.be1 = std::make_shared<const FemBackwardEulerFlow>(ctx.problem);
  ctx.hm1 = std::make_shared<const FemHeunFlow>(ctx.problem);
  return ctx;
}

struct Snapshot {
  double t;
  RVector phi;
};

/// Steps `flow` to `period` and keeps the states at the snapshot times that fall on a step.
RVector run_cell(const FlowStep& flow, const RVector& phi0, double period, long steps, bool keep_snapshots,
                 std::vector<Snapshot>& snapshots, double* seconds) {
  const double dt = period / static_cast<double>(steps);
  std::map<long, double> wanted;
  if (keep_snapshots) {
    for (double ts : snapshot_times(period)) {
      const long k = std::lround(ts / dt);
      if (std::abs(static_cast<double>(k) * dt - ts) <= 1e-9 * period) {
        wanted.emplace(k, ts);
      }
    }
  }
  long index = 0;
  return propagate(
      flow, phi0, 0.0, period, static_cast<int>(steps),
      [&](double, const RVector& y) {
        if (auto it = wanted.find(index); it != wanted.end()) {
          snapshots.push_back({it->second, y});
        }
        ++index;
      },
      seconds);
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

void write_snapshots(ExperimentReport& report, const std::filesystem::path& dir, const FemSpace& space,
                     const std::string& prefix, const std::string& scheme, const std::vector<Snapshot>& snaps,
                     std::ostream& table) {
  for (const auto& s : snaps) {
    const InterfaceMeasures m = interface_measures(space, s.phi);
    table << scheme << ',' << time_tag(s.t) << ',' << cxcomp::detail::sci(m.area) << ','
          << cxcomp::detail::sci(m.contour_length()) << '\n';
    if (!dir.empty()) {
      auto vtk = detail::open_file(report, dir, prefix + "_" + detail::file_label(scheme) + "_t" + time_tag(s.t) + ".vtk");
      write_vtk(vtk, space.mesh(), {{"phi", &s.phi}}, prefix + " " + scheme + " t=" + time_tag(s.t));
    }
  }
}

}  // namespace

ExperimentReport run_vortex_convergence(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = detail::new_report(config);
  const double period = config.period;
  const FemContext ctx = make_context(config, vortex_velocity(period));
  const RVector phi0 = interpolate(*ctx.space, signed_distance_circle(Point2(0.7, 0.7), 0.15));
  const auto counts = step_counts(period, config.dt0, config.levels);
  const auto dir = detail::output_dir(config);

  // Time-converged solution on the same mesh: its distance to phi0 is the spatial floor.
  const long ref_steps = std::max(1L, std::lround(period / config.reference_dt));
  const RVector reference = propagate(*ctx.flow(config.reference_scheme), phi0, 0.0, period,
                                      static_cast<int>(ref_steps));
  const double floor = l2_error(*ctx.space, reference, phi0);
  report.metrics.emplace_back("spatial_floor", floor);
  report.metrics.emplace_back("reference_dt", period / static_cast<double>(ref_steps));
  report.metrics.emplace_back("dofs", static_cast<double>(ctx.space->dof_count()));

  std::ostringstream snapshot_table;
  snapshot_table << "# cxcomp vortex-snapshots v1\nscheme,t,area,contour_length\n";
  for (const auto& label : config.schemes) {
    const FlowPtr flow = ctx.flow(label);
    std::vector<Snapshot> snaps;
    for (long n : counts) {
      ReportRow row;
      row.scheme = label;
      row.steps = n;
      row.dt = period / static_cast<double>(n);
      const bool keep = config.snapshots && n == counts.back();
      try {
        const RVector a = run_cell(*flow, phi0, period, n, keep, snaps, &row.seconds);
        row.error = l2_error(*ctx.space, a, phi0);
        row.temporal_error = l2_error(*ctx.space, a, reference);
      } catch (const Error& e) {
        detail::record_failure(report, row, e);
      }
      report.rows.push_back(std::move(row));
    }
    if (!snaps.empty()) {
      double longest = -1.0;
      double at = 0.0;
      for (const auto& s : snaps) {
        const double len = interface_measures(*ctx.space, s.phi).contour_length();
        if (len > longest) {
          longest = len;
          at = s.t;
        }
      }
      report.metrics.emplace_back(label + ".max_contour_time", at);
      report.metrics.emplace_back(label + ".max_contour_length", longest);
      write_snapshots(report, dir, *ctx.space, "vortex", label, snaps, snapshot_table);
    }
  }
  detail::fill_roc(report);
  for (const auto& label : config.schemes) {
    if (auto r = detail::asymptotic_roc(report, label, 0.0, true)) {
      report.metrics.emplace_back(label + ".asymptotic_temporal_roc", *r);
    }
  }

  if (!dir.empty()) {
    auto out = detail::open_file(report, dir, "vortex_converge.csv");
    write_rows_csv(out, report, true);
    auto metrics = detail::open_file(report, dir, "vortex_metrics.csv");
    write_metrics_csv(metrics, report);
    if (config.snapshots) {
      auto table = detail::open_file(report, dir, "vortex_snapshots.csv");
      table << snapshot_table.str();
    }
  }
  return report;
}

ExperimentReport run_zalesak(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = detail::new_report(config);
  const double period = config.period;
  const ZalesakSetup setup = zalesak_setup(period);
  const FemContext ctx = make_context(config, setup.velocity);
  const RVector phi0 = interpolate(*ctx.space, setup.initial);
  const auto counts = step_counts(period, config.dt0, config.levels);
  const auto dir = detail::output_dir(config);

  const InterfaceMeasures initial = interface_measures(*ctx.space, phi0);
  report.metrics.emplace_back("initial_area", initial.area);

  std::ostringstream snapshot_table;
  snapshot_table << "# cxcomp zalesak-snapshots v1\nscheme,t,area,contour_length\n";
  if (!dir.empty()) {
    auto c0 = detail::open_csv(report, dir, "zalesak_contour_t0.csv", "zalesak-contour");
    write_contour_csv(c0, initial.contour);
  }
  for (const auto& label : config.schemes) {
    const FlowPtr flow = ctx.flow(label);
    for (long n : counts) {
      ReportRow row;
      row.scheme = label;
      row.steps = n;
      row.dt = period / static_cast<double>(n);
      const bool finest = n == counts.back();
      std::vector<Snapshot> snaps;
      try {
        const RVector a = run_cell(*flow, phi0, period, n, finest && config.snapshots, snaps, &row.seconds);
        row.error = l2_error(*ctx.space, a, phi0);
        if (finest) {
          const InterfaceMeasures final_measures = interface_measures(*ctx.space, a);
          const double symdiff = symmetric_difference_area(*ctx.space, a, phi0);
          report.metrics.emplace_back(label + ".final_area", final_measures.area);
          report.metrics.emplace_back(label + ".area_drift",
                                      std::abs(final_measures.area - initial.area) / initial.area);
          report.metrics.emplace_back(label + ".symmetric_difference", symdiff);
          report.metrics.emplace_back(label + ".symmetric_difference_ratio", symdiff / initial.area);
          report.metrics.emplace_back(label + ".l2_difference", row.error);
          if (!dir.empty()) {
            auto cT = detail::open_csv(report, dir, "zalesak_contour_T_" + detail::file_label(label) + ".csv",
                                       "zalesak-contour");
            write_contour_csv(cT, final_measures.contour);
          }
        }
      } catch (const Error& e) {
        detail::record_failure(report, row, e);
      }
      report.rows.push_back(std::move(row));
      write_snapshots(report, dir, *ctx.space, "zalesak", label, snaps, snapshot_table);
    }
  }
  detail::fill_roc(report);

  if (!dir.empty()) {
    auto out = detail::open_file(report, dir, "zalesak.csv");
    write_rows_csv(out, report, true);
    auto metrics = detail::open_file(report, dir, "zalesak_metrics.csv");
    write_metrics_csv(metrics, report);
    if (config.snapshots) {
      auto table = detail::open_file(report, dir, "zalesak_snapshots.csv");
      table << snapshot_table.str();
    }
  }
  return report;
}

}  // namespace cxcomp::bench
