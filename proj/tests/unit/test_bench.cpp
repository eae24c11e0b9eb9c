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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cxcomp/bench/config.hpp"
#include "cxcomp/bench/experiments.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/errors.hpp"
#include "cxcomp/lotka_volterra.hpp"

namespace {

using namespace cxcomp::bench;

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cxcomp_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, KindNames) {
  EXPECT_EQ(parse_kind("vortex"), ExperimentKind::VortexConverge);
  EXPECT_EQ(parse_kind("vortex-converge"), ExperimentKind::VortexConverge);
  EXPECT_EQ(parse_kind("stability-region"), ExperimentKind::StabilityRegion);
  EXPECT_EQ(kind_name(ExperimentKind::OdeCpu), "ode-cpu");
  EXPECT_THROW((void)parse_kind("nope"), cxcomp::ConfigError);
}

TEST(Config, Defaults) {
  const auto z = default_config(ExperimentKind::Zalesak);
  EXPECT_EQ(z.schemes, std::vector<std::string>{"BE2"});
  EXPECT_DOUBLE_EQ(z.dt0, 1e-3);
  EXPECT_EQ(z.mesh_n, 100);
  EXPECT_DOUBLE_EQ(z.period, 4.0);
  const auto v = default_config(ExperimentKind::VortexConverge);
  EXPECT_EQ(v.schemes, (std::vector<std::string>{"BE1", "BE2", "BE4"}));
  EXPECT_EQ(v.mesh_n, 64);
  for (auto kind : {ExperimentKind::Coeffs, ExperimentKind::OdeConverge, ExperimentKind::OdeCpu,
                    ExperimentKind::VortexConverge, ExperimentKind::Zalesak, ExperimentKind::StabilityRegion}) {
    EXPECT_NO_THROW(default_config(kind).validate()) << kind_name(kind);
  }
}

TEST(Config, TextParsing) {
  auto c = default_config(ExperimentKind::OdeConverge);
  apply_config_text(c, "# sweep\nschemes = BE1, HM2\n\ndt0=0.1   # coarse\nlevels = 3\nkind = ode-converge\n");
  EXPECT_EQ(c.schemes, (std::vector<std::string>{"BE1", "HM2"}));
  EXPECT_DOUBLE_EQ(c.dt0, 0.1);
  EXPECT_EQ(c.levels, 3);
  try {
    apply_config_text(c, "levels = 2\nbogus = 1\n");
    FAIL() << "expected ConfigError";
  } catch (const cxcomp::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(apply_config_text(c, "kind = zalesak\n"), cxcomp::ConfigError);
  EXPECT_THROW(apply_config_text(c, "dt0\n"), cxcomp::ConfigError);
  EXPECT_THROW(apply_setting(c, "levels", "two"), cxcomp::ConfigError);
  EXPECT_THROW(apply_setting(c, "dt0", "0.1x"), cxcomp::ConfigError);
}

TEST(Config, ValidationAndRoundTrip) {
  auto c = default_config(ExperimentKind::Coeffs);
  apply_setting(c, "pairs", "1:0,2:-1");
  ASSERT_EQ(c.pairs.size(), 2u);
  EXPECT_EQ(c.pairs[1].branch, -1);
  auto v = default_config(ExperimentKind::VortexConverge);
  apply_setting(v, "mesh-n", "12");
  apply_setting(v, "supg_c", "0.25");
  apply_setting(v, "window", "-1,1,-2,2");
  auto back = default_config(ExperimentKind::VortexConverge);
  apply_config_text(back, to_text(v));
  EXPECT_EQ(to_text(back), to_text(v));
  EXPECT_EQ(back.mesh_n, 12);
  auto bad = default_config(ExperimentKind::OdeConverge);
  bad.schemes = {"BE7X"};
  EXPECT_THROW(bad.validate(), cxcomp::ConfigError);
  bad = default_config(ExperimentKind::OdeConverge);
  bad.dt0 = -1.0;
  EXPECT_THROW(bad.validate(), cxcomp::ConfigError);
  bad = default_config(ExperimentKind::Zalesak);
  bad.period = 0.0;
  EXPECT_THROW(bad.validate(), cxcomp::ConfigError);
}

TEST(Config, FileLoading) {
  const auto dir = scratch_dir("config");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.cfg") << "schemes = BE3\nlevels = 1\n";
  auto c = default_config(ExperimentKind::OdeConverge);
  apply_config_file(c, dir / "c.cfg");
  EXPECT_EQ(c.schemes, std::vector<std::string>{"BE3"});
  EXPECT_THROW(apply_config_file(c, dir / "missing.cfg"), cxcomp::ConfigError);
}

TEST(Schemes, Parsing) {
  const auto be3 = parse_scheme("BE3");
  EXPECT_EQ(be3.order, 3);
  EXPECT_EQ(be3.coefficients.size(), 4u);
  EXPECT_EQ(parse_scheme("HM1").order, 2);
  EXPECT_EQ(parse_scheme("HM2").order, 3);
  EXPECT_EQ(parse_scheme("HM4").order, 4);
  EXPECT_EQ(parse_scheme("HM8").order, 5);
  const auto sym = parse_scheme("BE1-SYM");
  EXPECT_EQ(sym.construction, Construction::SymmetricAverage);
  EXPECT_EQ(sym.order, 3);
  EXPECT_EQ(parse_scheme("BE2-TJ").order, 3);
  EXPECT_EQ(parse_scheme("HM1-TJ").order, 3);
  EXPECT_THROW((void)parse_scheme("BE1-TJ"), cxcomp::ConfigError);
  EXPECT_THROW((void)parse_scheme("HM3"), cxcomp::ConfigError);
  EXPECT_THROW((void)parse_scheme("BE0"), cxcomp::ConfigError);
  EXPECT_FALSE(is_known_scheme("RK4"));
  EXPECT_TRUE(is_known_scheme("BE4"));
}

TEST(Schemes, FlowsReachTheirOrder) {
  const auto sys = cxcomp::lv_system({});
  const cxcomp::FlowPtr be = std::make_shared<cxcomp::BackwardEulerFlow>(sys);
  const cxcomp::FlowPtr hm = std::make_shared<cxcomp::HeunFlow>(sys);
  for (const char* label : {"BE2", "HM2", "BE2-TJ", "BE1-SYM"}) {
    const auto spec = parse_scheme(label);
    const auto flow = make_flow(spec, spec.base == cxcomp::BaseScheme::BackwardEuler ? be : hm);
    EXPECT_EQ(flow->order(), spec.order) << label;
    EXPECT_EQ(flow->label(), label);
  }
  EXPECT_THROW((void)make_flow(parse_scheme("HM2"), be), cxcomp::ConfigError);
}

TEST(Grid, StepCounts) {
  EXPECT_EQ(step_counts(10.0, 0.2, 2), (std::vector<long>{50, 100, 200}));
  EXPECT_EQ(step_counts(11.4045, 0.2, 0), std::vector<long>{57});
  EXPECT_EQ(step_counts(0.1, 0.5, 1), (std::vector<long>{1, 2}));
  const auto snaps = snapshot_times(4.0);
  EXPECT_EQ(snaps, (std::vector<double>{0.0, 0.6, 1.0, 2.0, 2.6, 3.4, 3.8, 4.0}));
}

TEST(Grid, SecondsAtError) {
  const auto row = [](double error, double seconds, bool ok = true) {
    ReportRow r;
    r.scheme = "X";
    r.error = error;
    r.seconds = seconds;
    r.ok = ok;
    return r;
  };
  const ReportRow a = row(1e-4, 1.0);
  const ReportRow b = row(1e-6, 10.0);
  const ReportRow failed = row(0.0, 50.0, false);
  const std::vector<const ReportRow*> rows = {&a, &b, &failed};
  EXPECT_NEAR(*seconds_at_error(rows, 1e-5), std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(*seconds_at_error(rows, 1e-8), 100.0, 1e-9);
  EXPECT_NEAR(*seconds_at_error(rows, 1e-4), 1.0, 1e-12);
  // Extrapolation fits the nearest cells, so one noisy timing does not flip the slope.
  const ReportRow c = row(1e-5, 3.0);
  const ReportRow d = row(1e-7, 2.0);
  const std::vector<const ReportRow*> noisy = {&a, &c, &b, &d};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto* r : noisy) {
    const double x = std::log(r->error), y = std::log(r->seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  const double expected = std::exp((sy - slope * sx) / 4 + slope * std::log(1e-9));
  EXPECT_NEAR(*seconds_at_error(noisy, 1e-9), expected, 1e-9 * expected);
  EXPECT_GT(*seconds_at_error(noisy, 1e-9), 2.0);
  const std::vector<const ReportRow*> one = {&a};
  EXPECT_FALSE(seconds_at_error(one, 1e-5).has_value());
}

TEST(Experiments, Coefficients) {
  auto c = default_config(ExperimentKind::Coeffs);
  apply_setting(c, "pairs", "1:0,2:0,2:5");
  const auto report = run_experiment(c);
  ASSERT_EQ(report.coefficients.size(), 3u);
  EXPECT_EQ(report.coefficients[0].a1, cxcomp::Complex(0.5, 0.5));
  EXPECT_EQ(report.coefficients[0].sum_residual, 0.0);
  EXPECT_EQ(report.coefficients[0].power_residual, 0.0);
  EXPECT_FALSE(report.coefficients[2].ok);
  EXPECT_EQ(report.exit_code(), 2);
  std::ostringstream out;
  write_coefficients_csv(out, report);
  EXPECT_NE(out.str().find("2,0,0.5,0.28867513459481287,0.5,-0.28867513459481287"), std::string::npos) << out.str();
  EXPECT_EQ(out.str().rfind("# cxcomp coeffs v1\n", 0), 0u);
}

TEST(Experiments, OdeConvergenceRowsAndRates) {
  auto c = default_config(ExperimentKind::OdeConverge);
  c.schemes = {"BE1", "BE2"};
  c.levels = 3;
  const auto report = run_experiment(c);
  ASSERT_EQ(report.rows.size(), 8u);
  EXPECT_EQ(report.exit_code(), 0);
  for (const auto& scheme : c.schemes) {
    const auto rows = report.rows_for(scheme);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_FALSE(rows[0]->roc.has_value());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_LT(rows[i]->dt, rows[i - 1]->dt);
      const std::vector<double> e = {rows[i - 1]->error, rows[i]->error};
      const std::vector<double> d = {rows[i - 1]->dt, rows[i]->dt};
      ASSERT_TRUE(rows[i]->roc.has_value());
      EXPECT_DOUBLE_EQ(*rows[i]->roc, cxcomp::roc(e, d)[0]);
    }
  }
  EXPECT_NEAR(*report.metric("window"), cxcomp::lv_period(), 1e-12);
}

TEST(Experiments, SingleCellHasNoRate) {
  auto c = default_config(ExperimentKind::OdeConverge);
  c.schemes = {"HM4"};
  c.levels = 0;
  const auto report = run_experiment(c);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_FALSE(report.rows[0].roc.has_value());
}

TEST(Experiments, CsvIsDeterministic) {
  auto c = default_config(ExperimentKind::OdeConverge);
  c.schemes = {"BE2", "HM2"};
  c.levels = 2;
  std::ostringstream a, b;
  write_rows_csv(a, run_experiment(c), false);
  write_rows_csv(b, run_experiment(c), false);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# cxcomp ode-converge v1\nscheme,dt,steps,error,roc,status\n", 0), 0u) << a.str();
}

TEST(Experiments, OdeConvergenceFiles) {
  auto c = default_config(ExperimentKind::OdeConverge);
  c.schemes = {"BE1", "HM1"};
  c.levels = 1;
  c.output_dir = scratch_dir("ode").string();
  const auto report = run_experiment(c);
  for (const char* name : {"ode_converge_BE1.csv", "ode_converge_HM1.csv", "ode_converge_table.csv", "ode_converge.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.output_dir) / name)) << name;
  }
  const std::string be1 = slurp(std::filesystem::path(c.output_dir) / "ode_converge_BE1.csv");
  EXPECT_EQ(be1.rfind("# cxcomp ode-converge v1\ndt,error,roc\n", 0), 0u) << be1;
}

TEST(Experiments, CpuCountersAndLinearCost) {
  auto c = default_config(ExperimentKind::OdeCpu);
  c.schemes = {"BE1", "BE2"};
  c.dt0 = 0.002;
  c.levels = 1;
  const auto report = run_experiment(c);
  EXPECT_DOUBLE_EQ(*report.metric("BE1.newton_solves_per_step"), 1.0);
  EXPECT_DOUBLE_EQ(*report.metric("BE2.newton_solves_per_step"), 2.0);
  const auto be1 = report.rows_for("BE1");
  ASSERT_EQ(be1.size(), 2u);
  EXPECT_EQ(be1[1]->steps, 2 * be1[0]->steps);
  const double ratio = be1[1]->seconds / be1[0]->seconds;
  EXPECT_GT(ratio, 1.0);
  EXPECT_LT(ratio, 4.0);
}

TEST(Experiments, FailedCellIsRecorded) {
  auto c = default_config(ExperimentKind::OdeConverge);
  c.schemes = {"HM1"};
  c.dt0 = 5.0;  // explicit Heun leaves the positive quadrant
  c.levels = 0;
  const auto report = run_experiment(c);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_FALSE(report.rows[0].ok);
  EXPECT_FALSE(report.rows[0].message.empty());
  EXPECT_EQ(report.exit_code(), 2);
}

TEST(Experiments, StabilityRegion) {
  auto c = default_config(ExperimentKind::StabilityRegion);
  c.schemes = {"BE1", "BE2"};
  c.resolution = 21;
  c.output_dir = scratch_dir("stability").string();
  const auto report = run_experiment(c);
  // Re z <= 0 columns of an inclusive 21-point grid over [-6, 2].
  EXPECT_GE(*report.metric("BE1.in_region"), 16.0 * 21.0);
  EXPECT_EQ(*report.metric("BE1.region_only"), 0.0);
  const std::string csv = slurp(std::filesystem::path(c.output_dir) / "stability_BE2.csv");
  EXPECT_NE(csv.find("re,im,abs_s,in_region,in_intersection\n"), std::string::npos);
}

TEST(Experiments, SmallVortex) {
  auto c = default_config(ExperimentKind::VortexConverge);
  c.schemes = {"BE1", "BE2"};
  c.mesh_n = 8;
  c.period = 1.0;
  c.dt0 = 0.1;
  c.levels = 1;
  c.reference_dt = 0.025;
  c.output_dir = scratch_dir("vortex").string();
  const auto report = run_experiment(c);
  EXPECT_EQ(report.exit_code(), 0);
  ASSERT_EQ(report.rows.size(), 4u);
  for (const auto& row : report.rows) {
    ASSERT_TRUE(row.temporal_error.has_value());
    EXPECT_GT(row.error, 0.0);
  }
  EXPECT_LT(report.rows[3].temporal_error.value(), report.rows[1].temporal_error.value());
  EXPECT_TRUE(report.metric("spatial_floor").has_value());
  EXPECT_TRUE(report.metric("BE2.max_contour_time").has_value());
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.output_dir) / "vortex_BE2_t0.50.vtk"));
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.output_dir) / "vortex_converge.csv"));
}

TEST(Experiments, SmallZalesak) {
  auto c = default_config(ExperimentKind::Zalesak);
  c.mesh_n = 20;
  c.dt0 = 0.02;
  c.period = 1.0;
  c.output_dir = scratch_dir("zalesak").string();
  const auto report = run_experiment(c);
  EXPECT_EQ(report.exit_code(), 0);
  EXPECT_GT(*report.metric("initial_area"), 0.0);
  EXPECT_TRUE(report.metric("BE2.area_drift").has_value());
  EXPECT_TRUE(report.metric("BE2.symmetric_difference_ratio").has_value());
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.output_dir) / "zalesak_contour_t0.csv"));
}
