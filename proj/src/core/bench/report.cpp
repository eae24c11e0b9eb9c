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
#include <sstream>

#include <Eigen/Core>

#include "../format.hpp"
#include "common.hpp"
#include "cxcomp/errors.hpp"
#include "cxcomp/lotka_volterra.hpp"

namespace cxcomp::bench {

namespace {
constexpr std::size_t kExtrapolationCells = 4;
}  // namespace

namespace detail {

ExperimentReport new_report(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  report.metadata.emplace_back("experiment", kind_name(config.kind));
  report.metadata.emplace_back("config", to_text(config));
#ifdef __VERSION__
  report.metadata.emplace_back("compiler", __VERSION__);
#endif
  report.metadata.emplace_back("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                            std::to_string(EIGEN_MINOR_VERSION));
  return report;
}

std::filesystem::path output_dir(const ExperimentConfig& config) {
  if (config.output_dir.empty()) {
    return {};
  }
  std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  return dir;
}

std::ofstream open_file(ExperimentReport& report, const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  report.files.push_back(path.string());
  return out;
}

std::ofstream open_csv(ExperimentReport& report, const std::filesystem::path& dir, const std::string& name,
                       const std::string& kind) {
  auto out = open_file(report, dir, name);
  out << "# cxcomp " << kind << " v1\n";
  return out;
}

void fill_roc(ExperimentReport& report) {
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    ReportRow& row = report.rows[i];
    row.roc.reset();
    row.temporal_roc.reset();
    if (i == 0) {
      continue;
    }
    const ReportRow& prev = report.rows[i - 1];
    if (prev.scheme != row.scheme || !prev.ok || !row.ok) {
      continue;
    }
    const double dts[2] = {prev.dt, row.dt};
    if (prev.error > 0.0 && row.error > 0.0) {
      const double errs[2] = {prev.error, row.error};
      row.roc = roc(errs, dts).front();
    }
    if (prev.temporal_error && row.temporal_error && *prev.temporal_error > 0.0 && *row.temporal_error > 0.0) {
      const double errs[2] = {*prev.temporal_error, *row.temporal_error};
      row.temporal_roc = roc(errs, dts).front();
    }
  }
}

std::optional<double> asymptotic_roc(const ExperimentReport& report, const std::string& scheme, double floor,
                                     bool temporal) {
  const auto rows = report.rows_for(scheme);
  for (std::size_t i = rows.size(); i-- > 1;) {
    const ReportRow& a = *rows[i - 1];
    const ReportRow& b = *rows[i];
    if (!a.ok || !b.ok) {
      continue;
    }
    const double ea = temporal ? a.temporal_error.value_or(0.0) : a.error;
    const double eb = temporal ? b.temporal_error.value_or(0.0) : b.error;
    if (ea > floor && eb > floor) {
      return temporal ? b.temporal_roc : b.roc;
    }
  }
  return std::nullopt;
}

void record_failure(ExperimentReport& report, ReportRow& row, const std::exception& e) {
  row.ok = false;
  row.message = e.what();
  ++report.failed_cells;
}

std::string file_label(const std::string& scheme) {
  std::string out = scheme;
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

}  // namespace detail

std::optional<double> ExperimentReport::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) {
      return value;
    }
  }
  return std::nullopt;
}

std::vector<const ReportRow*> ExperimentReport::rows_for(std::string_view scheme) const {
  std::vector<const ReportRow*> out;
  for (const auto& row : rows) {
    if (row.scheme == scheme) {
      out.push_back(&row);
    }
  }
  return out;
}

std::vector<long> step_counts(double window, double dt0, int levels) {
  if (!(window > 0.0) || !(dt0 > 0.0) || levels < 0) {
    throw ConfigError("step_counts needs a positive window and dt0");
  }
  const long n0 = std::max(1L, std::lround(window / dt0));
  std::vector<long> counts;
  for (int k = 0; k <= levels; ++k) {
    counts.push_back(n0 << k);
  }
  return counts;
}

std::optional<double> seconds_at_error(std::span<const ReportRow* const> rows, double target) {
  std::vector<std::pair<double, double>> pts;  // (log error, log seconds)
  for (const ReportRow* r : rows) {
    if (r->ok && r->error > 0.0 && r->seconds > 0.0) {
      pts.emplace_back(std::log(r->error), std::log(r->seconds));
    }
  }
  if (pts.size() < 2) {
    return std::nullopt;
  }
  std::sort(pts.begin(), pts.end());
  const double x = std::log(target);
  if (x > pts.front().first && x < pts.back().first) {
    std::size_t i = 0;
    while (pts[i + 1].first < x) {
      ++i;
    }
    const auto [x0, y0] = pts[i];
    const auto [x1, y1] = pts[i + 1];
    return std::exp(y0 + (y1 - y0) * (x - x0) / (x1 - x0));
  }
  // Outside the measured range: least-squares line through the nearest cells.
  const std::size_t n = std::min<std::size_t>(kExtrapolationCells, pts.size());
  const auto first = x <= pts.front().first ? pts.begin() : pts.end() - static_cast<std::ptrdiff_t>(n);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (auto it = first; it != first + static_cast<std::ptrdiff_t>(n); ++it) {
    sx += it->first;
    sy += it->second;
    sxx += it->first * it->first;
    sxy += it->first * it->second;
  }
  const double m = static_cast<double>(n);
  const double det = m * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) {
    return std::exp(sy / m);
  }
  const double slope = (m * sxy - sx * sy) / det;
  return std::exp((sy - slope * sx) / m + slope * x);
}

std::vector<double> snapshot_times(double period) {
  std::vector<double> out;
  for (double f : {0.0, 0.15, 0.25, 0.5, 0.65, 0.85, 0.95, 1.0}) {
    out.push_back(f * period);
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::Coeffs:
      return emit_coefficients(config);
    case ExperimentKind::OdeConverge:
      return run_ode_convergence(config);
    case ExperimentKind::OdeCpu:
      return run_cpu_error(config);
    case ExperimentKind::VortexConverge:
      return run_vortex_convergence(config);
    case ExperimentKind::Zalesak:
      return run_zalesak(config);
    case ExperimentKind::StabilityRegion:
      return run_stability_region(config);
  }
  throw ConfigError("unknown experiment kind");
}

namespace {

std::string opt_num(const std::optional<double>& v) {
  if (!v) {
    return "--";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

}  // namespace

void write_rows_csv(std::ostream& out, const ExperimentReport& report, bool with_timing) {
  const bool vortex = report.config.kind == ExperimentKind::VortexConverge;
  out << "# cxcomp " << kind_name(report.config.kind) << " v1\n";
  out << "scheme,dt,steps,error,roc";
  if (vortex) {
    out << ",temporal_error,temporal_roc";
  }
  if (with_timing) {
    out << ",seconds";
  }
  out << ",status\n";
  for (const auto& r : report.rows) {
    out << r.scheme << ',' << cxcomp::detail::sci(r.dt) << ',' << r.steps << ','
        << (r.ok ? cxcomp::detail::sci(r.error) : std::string("nan")) << ',' << opt_num(r.roc);
    if (vortex) {
      out << ',' << (r.temporal_error ? cxcomp::detail::sci(*r.temporal_error) : std::string("--")) << ','
          << opt_num(r.temporal_roc);
    }
    if (with_timing) {
      out << ',' << cxcomp::detail::sci(r.seconds, 4);
    }
    out << ',' << (r.ok ? std::string("ok") : csv_field("error: " + r.message)) << '\n';
  }
}

void write_coefficients_csv(std::ostream& out, const ExperimentReport& report) {
  out << "# cxcomp coeffs v1\n";
  out << "p,l,a1_re,a1_im,a2_re,a2_im,sum_residual,power_residual,status\n";
  for (const auto& c : report.coefficients) {
    out << c.base_order << ',' << c.branch << ',';
    if (c.ok) {
      out << cxcomp::detail::sig17(c.a1.real()) << ',' << cxcomp::detail::sig17(c.a1.imag()) << ','
          << cxcomp::detail::sig17(c.a2.real()) << ',' << cxcomp::detail::sig17(c.a2.imag()) << ','
          << cxcomp::detail::sci(c.sum_residual) << ',' << cxcomp::detail::sci(c.power_residual) << ",ok\n";
    } else {
      out << ",,,,,," << csv_field("error: " + c.message) << '\n';
    }
  }
}

void write_metrics_csv(std::ostream& out, const ExperimentReport& report) {
  out << "# cxcomp " << kind_name(report.config.kind) << "-metrics v1\n";
  out << "name,value\n";
  for (const auto& [name, value] : report.metrics) {
    out << name << ',' << cxcomp::detail::sig17(value) << '\n';
  }
}

}  // namespace cxcomp::bench
