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

#include "cxcomp/cxcomp.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "cxcomp/bench/config.hpp"
#include "cxcomp/bench/experiments.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/composition.hpp"
#include "cxcomp/errors.hpp"
#include "cxcomp/lotka_volterra.hpp"

struct cxcomp_config {
  cxcomp::bench::ExperimentConfig config;
};

struct cxcomp_report {
  cxcomp::bench::ExperimentReport report;
};

namespace {

thread_local std::string last_error;

cxcomp_status fail(cxcomp_status status, const std::string& message) {
  last_error = message;
  return status;
}

cxcomp_status ok() {
  last_error.clear();
  return CXCOMP_OK;
}

// Maps the exception in flight to a status code.
cxcomp_status translate() {
  try {
    throw;
  } catch (const cxcomp::ConfigError& e) {
    return fail(CXCOMP_ERR_CONFIG, e.what());
  } catch (const cxcomp::SingularBranchError& e) {
    return fail(CXCOMP_ERR_SINGULAR_BRANCH, e.what());
  } catch (const cxcomp::DomainError& e) {
    return fail(CXCOMP_ERR_DOMAIN, e.what());
  } catch (const cxcomp::StepFailure& e) {
    return fail(CXCOMP_ERR_STEP_FAILURE, e.what());
  } catch (const cxcomp::LinearSolveError& e) {
    return fail(CXCOMP_ERR_LINEAR_SOLVE, e.what());
  } catch (const cxcomp::AssemblyError& e) {
    return fail(CXCOMP_ERR_ASSEMBLY, e.what());
  } catch (const cxcomp::Error& e) {
    return fail(CXCOMP_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CXCOMP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CXCOMP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CXCOMP_ERR_INTERNAL, "unknown error");
  }
}

template <class Fn>
cxcomp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (...) {
    return translate();
  }
}

cxcomp_status null_argument(const char* name) {
  return fail(CXCOMP_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

}  // namespace

extern "C" {

const char* cxcomp_version(void) { return "0.1.0"; }

const char* cxcomp_status_string(cxcomp_status status) {
  switch (status) {
    case CXCOMP_OK:
      return "ok";
    case CXCOMP_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case CXCOMP_ERR_DOMAIN:
      return "domain error";
    case CXCOMP_ERR_SINGULAR_BRANCH:
      return "singular branch";
    case CXCOMP_ERR_STEP_FAILURE:
      return "step failure";
    case CXCOMP_ERR_LINEAR_SOLVE:
      return "linear solve error";
    case CXCOMP_ERR_ASSEMBLY:
      return "assembly error";
    case CXCOMP_ERR_CONFIG:
      return "configuration error";
    case CXCOMP_ERR_IO:
      return "i/o error";
    case CXCOMP_ERR_OUT_OF_RANGE:
      return "index out of range";
    case CXCOMP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* cxcomp_last_error(void) { return last_error.c_str(); }

cxcomp_status cxcomp_pair_coefficients(int base_order, int branch, double a1[2], double a2[2]) {
  if (a1 == nullptr || a2 == nullptr) {
    return null_argument("a1/a2");
  }
  return guarded([&] {
    const auto pair = cxcomp::pair_coefficients(base_order, branch);
    a1[0] = pair.a1.real();
    a1[1] = pair.a1.imag();
    a2[0] = pair.a2.real();
    a2[1] = pair.a2.imag();
    return ok();
  });
}

cxcomp_status cxcomp_validate_conditions(const double* coefficients, size_t count, int base_order,
                                         double* sum_residual, double* power_residual) {
  if ((coefficients == nullptr && count > 0) || sum_residual == nullptr || power_residual == nullptr) {
    return null_argument("coefficients/residual outputs");
  }
  return guarded([&] {
    std::vector<cxcomp::Complex> coeffs(count);
    for (size_t i = 0; i < count; ++i) {
      coeffs[i] = {coefficients[2 * i], coefficients[2 * i + 1]};
    }
    const auto res = cxcomp::validate_conditions(coeffs, base_order);
    *sum_residual = res.sum;
    *power_residual = res.power;
    return ok();
  });
}

cxcomp_status cxcomp_triple_jump_coefficients(int base_order, double out[3]) {
  if (out == nullptr) {
    return null_argument("out");
  }
  return guarded([&] {
    const auto tj = cxcomp::triple_jump_coefficients(base_order);
    for (int i = 0; i < 3; ++i) {
      out[i] = tj[static_cast<std::size_t>(i)];
    }
    return ok();
  });
}

cxcomp_status cxcomp_stability(const char* scheme, double re, double im, double* abs_s, int* in_region,
                               int* in_intersection) {
  if (scheme == nullptr || abs_s == nullptr || in_region == nullptr || in_intersection == nullptr) {
    return null_argument("scheme/outputs");
  }
  return guarded([&] {
    const auto spec = cxcomp::bench::parse_scheme(scheme);
    const cxcomp::Complex z(re, im);
    const auto sample = cxcomp::stability_function(spec.base, spec.coefficients, z);
    *abs_s = sample.bounded ? std::abs(sample.value) : std::numeric_limits<double>::infinity();
    *in_region = sample.in_region ? 1 : 0;
    bool all = sample.in_region;
    if (!spec.coefficients.empty()) {
      all = true;
      for (const auto& a : spec.coefficients) {
        all = all && std::abs(cxcomp::base_stability(spec.base, a * z)) <= 1.0;
      }
    }
    *in_intersection = all ? 1 : 0;
    return ok();
  });
}

cxcomp_status cxcomp_lv_period(double* period) {
  if (period == nullptr) {
    return null_argument("period");
  }
  return guarded([&] {
    *period = cxcomp::lv_period();
    return ok();
  });
}

cxcomp_status cxcomp_config_create(const char* kind, cxcomp_config** out) {
  if (kind == nullptr || out == nullptr) {
    return null_argument("kind/out");
  }
  *out = nullptr;
  return guarded([&] {
    auto* config = new cxcomp_config{cxcomp::bench::default_config(cxcomp::bench::parse_kind(kind))};
    *out = config;
    return ok();
  });
}

void cxcomp_config_destroy(cxcomp_config* config) { delete config; }

cxcomp_status cxcomp_config_load_file(cxcomp_config* config, const char* path) {
  if (config == nullptr || path == nullptr) {
    return null_argument("config/path");
  }
  return guarded([&] {
    // Apply to a copy so a bad file leaves the config untouched.
    auto updated = config->config;
    cxcomp::bench::apply_config_file(updated, path);
    config->config = std::move(updated);
    return ok();
  });
}

cxcomp_status cxcomp_config_set(cxcomp_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return null_argument("config/key/value");
  }
  return guarded([&] {
    cxcomp::bench::apply_setting(config->config, key, value);
    return ok();
  });
}

cxcomp_status cxcomp_config_validate(const cxcomp_config* config) {
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded([&] {
    config->config.validate();
    return ok();
  });
}

cxcomp_status cxcomp_config_to_text(const cxcomp_config* config, char* buffer, size_t capacity, size_t* needed) {
  if (config == nullptr || (buffer == nullptr && capacity > 0)) {
    return null_argument("config/buffer");
  }
  return guarded([&] {
    const std::string text = cxcomp::bench::to_text(config->config);
    if (needed != nullptr) {
      *needed = text.size() + 1;
    }
    if (capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
    return ok();
  });
}

cxcomp_status cxcomp_run(const cxcomp_config* config, cxcomp_report** out) {
  if (config == nullptr || out == nullptr) {
    return null_argument("config/out");
  }
  *out = nullptr;
  return guarded([&] {
    auto* report = new cxcomp_report{cxcomp::bench::run_experiment(config->config)};
    *out = report;
    return ok();
  });
}

void cxcomp_report_destroy(cxcomp_report* report) { delete report; }

int cxcomp_report_exit_code(const cxcomp_report* report) {
  return report == nullptr ? 1 : report->report.exit_code();
}

size_t cxcomp_report_row_count(const cxcomp_report* report) {
  return report == nullptr ? 0 : report->report.rows.size();
}

cxcomp_status cxcomp_report_row(const cxcomp_report* report, size_t index, cxcomp_row* out) {
  if (report == nullptr || out == nullptr) {
    return null_argument("report/out");
  }
  if (index >= report->report.rows.size()) {
    return fail(CXCOMP_ERR_OUT_OF_RANGE, "row index " + std::to_string(index) + " out of range");
  }
  const auto& r = report->report.rows[index];
  out->scheme = r.scheme.c_str();
  out->dt = r.dt;
  out->steps = r.steps;
  out->error = r.error;
  out->has_roc = r.roc.has_value();
  out->roc = r.roc.value_or(0.0);
  out->seconds = r.seconds;
  out->has_temporal_error = r.temporal_error.has_value();
  out->temporal_error = r.temporal_error.value_or(0.0);
  out->has_temporal_roc = r.temporal_roc.has_value();
  out->temporal_roc = r.temporal_roc.value_or(0.0);
  out->ok = r.ok;
  out->message = r.message.c_str();
  return ok();
}

size_t cxcomp_report_coefficient_count(const cxcomp_report* report) {
  return report == nullptr ? 0 : report->report.coefficients.size();
}

cxcomp_status cxcomp_report_coefficient(const cxcomp_report* report, size_t index, cxcomp_coefficient_row* out) {
  if (report == nullptr || out == nullptr) {
    return null_argument("report/out");
  }
  if (index >= report->report.coefficients.size()) {
    return fail(CXCOMP_ERR_OUT_OF_RANGE, "coefficient index " + std::to_string(index) + " out of range");
  }
  const auto& c = report->report.coefficients[index];
  out->base_order = c.base_order;
  out->branch = c.branch;
  out->a1_re = c.a1.real();
  out->a1_im = c.a1.imag();
  out->a2_re = c.a2.real();
  out->a2_im = c.a2.imag();
  out->sum_residual = c.sum_residual;
  out->power_residual = c.power_residual;
  out->ok = c.ok;
  out->message = c.message.c_str();
  return ok();
}

size_t cxcomp_report_metric_count(const cxcomp_report* report) {
  return report == nullptr ? 0 : report->report.metrics.size();
}

cxcomp_status cxcomp_report_metric(const cxcomp_report* report, size_t index, const char** name, double* value) {
  if (report == nullptr || name == nullptr || value == nullptr) {
    return null_argument("report/name/value");
  }
  if (index >= report->report.metrics.size()) {
    return fail(CXCOMP_ERR_OUT_OF_RANGE, "metric index " + std::to_string(index) + " out of range");
  }
  *name = report->report.metrics[index].first.c_str();
  *value = report->report.metrics[index].second;
  return ok();
}

cxcomp_status cxcomp_report_metric_by_name(const cxcomp_report* report, const char* name, double* value) {
  if (report == nullptr || name == nullptr || value == nullptr) {
    return null_argument("report/name/value");
  }
  if (auto v = report->report.metric(name)) {
    *value = *v;
    return ok();
  }
  return fail(CXCOMP_ERR_OUT_OF_RANGE, std::string("no metric named '") + name + "'");
}

size_t cxcomp_report_file_count(const cxcomp_report* report) {
  return report == nullptr ? 0 : report->report.files.size();
}

const char* cxcomp_report_file(const cxcomp_report* report, size_t index) {
  if (report == nullptr || index >= report->report.files.size()) {
    return nullptr;
  }
  return report->report.files[index].c_str();
}

cxcomp_status cxcomp_report_write_csv(const cxcomp_report* report, const char* path) {
  if (report == nullptr || path == nullptr) {
    return null_argument("report/path");
  }
  return guarded([&] {
    const auto write = [&](std::ostream& os) {
      if (report->report.config.kind == cxcomp::bench::ExperimentKind::Coeffs) {
        cxcomp::bench::write_coefficients_csv(os, report->report);
      } else if (report->report.rows.empty()) {
        cxcomp::bench::write_metrics_csv(os, report->report);
      } else {
        cxcomp::bench::write_rows_csv(os, report->report, true);
      }
    };
    if (std::strcmp(path, "-") == 0) {
      write(std::cout);
      std::cout.flush();
      return ok();
    }
    std::ofstream out(path);
    if (!out) {
      return fail(CXCOMP_ERR_IO, std::string("cannot write ") + path);
    }
    write(out);
    return out ? ok() : fail(CXCOMP_ERR_IO, std::string("write failed for ") + path);
  });
}

}  // extern "C"
