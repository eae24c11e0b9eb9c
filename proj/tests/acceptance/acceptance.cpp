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

// Acceptance suite. `cxcomp_acceptance N` checks criterion N and prints one
// "criterion N: PASS|FAIL ..." line; without arguments every criterion runs.
// `--record DIR` also stores each line in DIR; `--summary DIR` prints the stored
// lines and succeeds only when every criterion passed.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <tuple>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cxcomp/bench/config.hpp"
#include "cxcomp/bench/experiments.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/composition.hpp"
#include "cxcomp/levelset/assembly.hpp"
#include "cxcomp/levelset/fields.hpp"
#include "cxcomp/levelset/flows.hpp"
#include "cxcomp/levelset/mesh.hpp"
#include "cxcomp/lotka_volterra.hpp"
#include "cxcomp/ode.hpp"

namespace {

using cxcomp::CMatrix;
using cxcomp::Complex;
using cxcomp::CVector;
using cxcomp::RVector;
namespace bench = cxcomp::bench;
namespace ls = cxcomp::levelset;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double metric(const bench::ExperimentReport& report, const std::string& name) {
  const auto value = report.metric(name);
  return value ? *value : std::nan("");
}

// Least-squares slope of log(error) against log(dt).
double fitted_slope(const std::vector<double>& dts, const std::vector<double>& errors) {
  const auto n = static_cast<double>(dts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome coefficient_exactness() {
  Outcome out;
  const auto p1 = cxcomp::pair_coefficients(1, 0);
  const auto p2 = cxcomp::pair_coefficients(2, 0);
  const double e1 = std::max(std::abs(p1.a1 - Complex(0.5, 0.5)), std::abs(p1.a2 - Complex(0.5, -0.5)));
  const double e2 = std::max(std::abs(p2.a1 - Complex(0.5, std::sqrt(3.0) / 6.0)),
                             std::abs(p2.a2 - Complex(0.5, -std::sqrt(3.0) / 6.0)));
  out.check(e1 <= 1e-15, fmt("pair(1,0) deviation %.2e", e1));
  out.check(e2 <= 1e-15, fmt("pair(2,0) deviation %.2e", e2));
  double worst = 0.0;
  int count = 0;
  for (int p = 1; p <= 6; ++p) {
    const auto range = cxcomp::admissible_branches(p);
    for (int l = range.lo; l <= range.hi; ++l) {
      const auto pair = cxcomp::pair_coefficients(p, l);
      const std::vector<Complex> c = {pair.a1, pair.a2};
      const auto r = cxcomp::validate_conditions(c, p);
      worst = std::max({worst, r.sum, r.power});
      ++count;
    }
  }
  out.check(worst < 1e-13, fmt("max residual over %d pairs %.2e", count, worst));
  double tj_worst = 0.0;
  for (int p : {2, 4}) {
    const auto a = cxcomp::triple_jump_coefficients(p);
    const std::vector<Complex> c(a.begin(), a.end());
    const auto r = cxcomp::validate_conditions(c, p);
    tj_worst = std::max({tj_worst, r.sum, r.power});
  }
  out.check(tj_worst < 1e-13, fmt("triple jump residual %.2e", tj_worst));
  return out;
}

bench::ExperimentReport ode_sweep(std::vector<std::string> schemes, int levels) {
  auto config = bench::default_config(bench::ExperimentKind::OdeConverge);
  config.schemes = std::move(schemes);
  config.levels = levels;
  return bench::run_experiment(config);
}

Outcome table_order() {
  Outcome out;
  // dt0 = 2e-1 halved 7 times reaches 1.56e-3.
  const auto report = ode_sweep({"BE1", "BE2", "BE3", "HM1", "HM2", "HM4"}, 7);
  const std::vector<std::pair<std::string, double>> claimed = {{"BE1", 1}, {"BE2", 2}, {"BE3", 3},
                                                               {"HM1", 2}, {"HM2", 3}, {"HM4", 4}};
  out.check(report.exit_code() == 0, fmt("%d failed cells", report.failed_cells));
  for (const auto& [scheme, order] : claimed) {
    const double r = metric(report, scheme + ".asymptotic_roc");
    out.check(std::abs(r - order) <= 0.1, fmt("%s roc %.3f", scheme.c_str(), r));
  }
  return out;
}

Outcome table_magnitude() {
  Outcome out;
  const auto report = ode_sweep({"BE1", "BE2", "HM2", "HM4"}, 3);
  const std::vector<std::pair<std::string, double>> table = {
      {"BE1", 9.101e-2}, {"BE2", 7.698e-4}, {"HM2", 8.667e-7}, {"HM4", 4.412e-9}};
  for (const auto& [scheme, expected] : table) {
    const auto rows = report.rows_for(scheme);
    const auto* row = rows.back();
    const double factor = row->error / expected;
    out.check(row->ok && factor >= 0.2 && factor <= 5.0,
              fmt("%s dt %.3e error %.3e ratio %.2f", scheme.c_str(), row->dt, row->error, factor));
  }
  return out;
}

Outcome symmetric_average_order() {
  Outcome out;
  cxcomp::OdeSystem linear;
  linear.dimension = 1;
  linear.rhs = [](Complex, const CVector& y) { return CVector(-y); };
  linear.jacobian = [](Complex, const CVector&) { return CMatrix::Constant(1, 1, -1.0); };
  const auto spec = bench::parse_scheme("BE1-SYM");
  const auto flow = bench::make_flow(spec, std::make_shared<cxcomp::BackwardEulerFlow>(linear));
  std::vector<double> dts, errors;
  for (int k = 0; k < 5; ++k) {
    const int steps = 10 << k;
    const RVector y = cxcomp::propagate(*flow, RVector::Ones(1), 0.0, 1.0, steps);
    dts.push_back(1.0 / steps);
    errors.push_back(std::abs(y(0) - std::exp(-1.0)));
  }
  const double linear_roc = cxcomp::roc(errors, dts).back();
  out.check(std::abs(linear_roc - 3.0) <= 0.15, fmt("linear roc %.3f", linear_roc));
  const auto report = ode_sweep({"BE1-SYM"}, 7);
  const double lv_roc = metric(report, "BE1-SYM.asymptotic_roc");
  out.check(std::abs(lv_roc - 3.0) <= 0.15, fmt("Lotka-Volterra roc %.3f", lv_roc));
  return out;
}

Outcome cpu_ordering() {
  Outcome out;
  const auto report = bench::run_experiment(bench::default_config(bench::ExperimentKind::OdeCpu));
  const double be1 = metric(report, "BE1.seconds_at_target");
  const double be2 = metric(report, "BE2.seconds_at_target");
  const double hm1 = metric(report, "HM1.seconds_at_target");
  const double hm2 = metric(report, "HM2.seconds_at_target");
  out.check(be2 < be1, fmt("BE2 %.3es < BE1 %.3es", be2, be1));
  out.check(hm2 < hm1, fmt("HM2 %.3es < HM1 %.3es", hm2, hm1));
  return out;
}

Outcome vortex_convergence() {
  Outcome out;
  auto config = bench::default_config(bench::ExperimentKind::VortexConverge);
  config.snapshots = false;
  const auto report = bench::run_experiment(config);
  out.check(report.exit_code() == 0, fmt("%d failed cells", report.failed_cells));
  const double floor = metric(report, "spatial_floor");
  out.detail += fmt("; spatial floor %.3e", floor);
  const std::vector<std::pair<std::string, double>> bounds = {{"BE1", 0.8}, {"BE2", 1.7}, {"BE4", 3.0}};
  for (const auto& [scheme, bound] : bounds) {
    std::vector<double> dts, temporal, raw;
    for (const auto* row : report.rows_for(scheme)) {
      dts.push_back(row->dt);
      temporal.push_back(row->temporal_error.value_or(std::nan("")));
      raw.push_back(row->error);
    }
    const double slope = fitted_slope(dts, temporal);
    out.check(slope >= bound, fmt("%s temporal roc %.3f (finest pair %.3f, raw %.3f)", scheme.c_str(), slope,
                                  cxcomp::roc(temporal, dts).back(), cxcomp::roc(raw, dts).back()));
  }
  const auto be1 = report.rows_for("BE1");
  const auto be2 = report.rows_for("BE2");
  const auto be4 = report.rows_for("BE4");
  bool ordered = be1.size() == be2.size() && be2.size() == be4.size();
  for (std::size_t i = 0; ordered && i < be1.size(); ++i) {
    ordered = be4[i]->error <= be2[i]->error && be2[i]->error <= be1[i]->error;
  }
  out.check(ordered, "BE4 <= BE2 <= BE1 at every dt");
  return out;
}

Outcome zalesak_robustness() {
  Outcome out;
  auto config = bench::default_config(bench::ExperimentKind::Zalesak);
  config.snapshots = false;
  const auto report = bench::run_experiment(config);
  out.check(report.exit_code() == 0, fmt("%d failed cells", report.failed_cells));
  const double drift = metric(report, "BE2.area_drift");
  const double ratio = metric(report, "BE2.symmetric_difference_ratio");
  const double symdiff = metric(report, "BE2.symmetric_difference");
  out.check(drift < 0.03, fmt("area drift %.3f%%", 100.0 * drift));
  out.check(ratio < 0.05, fmt("symmetric difference %.3f%% of the initial slotted-disk area (%.3f%% of pi R^2)",
                              100.0 * ratio, 100.0 * symdiff / (std::numbers::pi * 0.15 * 0.15)));
  return out;
}

Outcome stability_identity() {
  Outcome out;
  const auto config = bench::default_config(bench::ExperimentKind::StabilityRegion);
  const auto report = bench::run_experiment(config);
  for (const auto& scheme : config.schemes) {
    const double region_only = metric(report, scheme + ".region_only");
    const double intersection_only = metric(report, scheme + ".intersection_only");
    out.check(region_only == 0.0 && intersection_only == 0.0,
              fmt("%s mismatches %.0f (product only) + %.0f (intersection only)", scheme.c_str(), region_only,
                  intersection_only));
  }
  return out;
}

Outcome fem_ode_agreement() {
  Outcome out;
  const auto space =
      std::make_shared<const ls::FemSpace>(std::make_shared<const ls::TriMesh>(ls::build_structured_mesh(8)));
  const auto vortex = ls::vortex_velocity(4.0);
  ls::VelocityField frozen;
  frozen.label = "frozen vortex";
  frozen.time_dependent = false;
  frozen.evaluate = [vortex](Complex, const ls::Point2& x) { return vortex.evaluate(0.0, x); };
  const auto ops = ls::assemble_operators(*space, frozen, 0.0);
  const CMatrix a = -CMatrix(ops.M).partialPivLu().solve(CMatrix(ops.K));
  cxcomp::OdeSystem system;
  system.dimension = static_cast<int>(a.rows());
  system.rhs = [a](Complex, const CVector& y) { return CVector(a * y); };
  system.jacobian = [a](Complex, const CVector&) { return a; };

  const auto problem = std::make_shared<const ls::LevelSetProblem>(space, frozen);
  const RVector phi0 = ls::interpolate(*space, ls::signed_distance_circle(ls::Point2(0.7, 0.7), 0.15));
  const cxcomp::FlowPtr fem_be = std::make_shared<ls::FemBackwardEulerFlow>(problem);
  const cxcomp::FlowPtr fem_hm = std::make_shared<ls::FemHeunFlow>(problem);
  const cxcomp::FlowPtr ode_be = std::make_shared<cxcomp::BackwardEulerFlow>(system);
  const cxcomp::FlowPtr ode_hm = std::make_shared<cxcomp::HeunFlow>(system);
  const std::vector<std::tuple<std::string, cxcomp::FlowPtr, cxcomp::FlowPtr>> pairs = {
      {"BE1", fem_be, ode_be},
      {"HM1", fem_hm, ode_hm},
      {"BE2", cxcomp::recursive_composition(fem_be, 2), cxcomp::recursive_composition(ode_be, 2)},
  };
  for (const auto& [label, fem, ode] : pairs) {
    const RVector x = cxcomp::propagate(*fem, phi0, 0.0, 0.5, 10);
    const RVector y = cxcomp::propagate(*ode, phi0, 0.0, 0.5, 10);
    const double rel = (x - y).norm() / y.norm();
    out.check(rel <= 1e-10, fmt("%s relative difference %.2e", label.c_str(), rel));
  }
  return out;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"coefficient exactness", coefficient_exactness},
      {"convergence orders", table_order},
      {"error magnitudes at dt 2.5e-2", table_magnitude},
      {"symmetric average order", symmetric_average_order},
      {"cpu time ordering", cpu_ordering},
      {"vortex temporal convergence", vortex_convergence},
      {"slotted disk robustness", zalesak_robustness},
      {"stability region identity", stability_identity},
      {"fem and ode stepping agree", fem_ode_agreement},
  };
  return all;
}

std::string record_dir;

bool run_one(int index) {
  const auto& c = criteria()[static_cast<std::size_t>(index - 1)];
  Outcome outcome;
  try {
    outcome = c.run();
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  const std::string line = fmt("criterion %d: %s %s: ", index, outcome.pass ? "PASS" : "FAIL", c.name) + outcome.detail;
  std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  if (!record_dir.empty()) {
    std::filesystem::create_directories(record_dir);
    std::ofstream(std::filesystem::path(record_dir) / fmt("criterion_%d.txt", index)) << line << '\n';
  }
  return outcome.pass;
}

int summary(const std::string& dir) {
  bool all = true;
  for (int n = 1; n <= static_cast<int>(criteria().size()); ++n) {
    std::ifstream in(std::filesystem::path(dir) / fmt("criterion_%d.txt", n));
    std::string line;
    if (!std::getline(in, line)) {
      line = fmt("criterion %d: FAIL not run", n);
    }
    all = all && line.find(": PASS ") != std::string::npos;
    std::printf("%s\n", line.c_str());
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = static_cast<int>(criteria().size());
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--record" || arg == "--summary") && i + 1 < argc) {
      if (arg == "--summary") {
        return summary(argv[i + 1]);
      }
      record_dir = argv[++i];
      continue;
    }
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > count) {
      std::fprintf(stderr, "usage: %s [1-%d ...]\n", argv[0], count);
      return 64;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    for (int n = 1; n <= count; ++n) {
      selected.push_back(n);
    }
  }
  bool all = true;
  for (int n : selected) {
    all = run_one(n) && all;
  }
  return all ? 0 : 1;
}
