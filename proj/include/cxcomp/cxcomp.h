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

#ifndef CXCOMP_H
#define CXCOMP_H

#include <stddef.h>

#if defined(_WIN32)
#define CXCOMP_API
#else
#define CXCOMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cxcomp_status {
  CXCOMP_OK = 0,
  CXCOMP_ERR_INVALID_ARGUMENT = 1,
  CXCOMP_ERR_DOMAIN = 2,
  CXCOMP_ERR_SINGULAR_BRANCH = 3,
  CXCOMP_ERR_STEP_FAILURE = 4,
  CXCOMP_ERR_LINEAR_SOLVE = 5,
  CXCOMP_ERR_ASSEMBLY = 6,
  CXCOMP_ERR_CONFIG = 7,
  CXCOMP_ERR_IO = 8,
  CXCOMP_ERR_OUT_OF_RANGE = 9,
  CXCOMP_ERR_INTERNAL = 10
} cxcomp_status;

typedef struct cxcomp_config cxcomp_config;
typedef struct cxcomp_report cxcomp_report;

/* One (scheme, dt) cell of a report. Strings stay valid while the report lives. */
typedef struct cxcomp_row {
  const char* scheme;
  double dt;
  long steps;
  double error;
  int has_roc;
  double roc;
  double seconds;
  int has_temporal_error;
  double temporal_error;
  int has_temporal_roc;
  double temporal_roc;
  int ok;
  const char* message;
} cxcomp_row;

typedef struct cxcomp_coefficient_row {
  int base_order;
  int branch;
  double a1_re, a1_im;
  double a2_re, a2_im;
  double sum_residual;
  double power_residual;
  int ok;
  const char* message;
} cxcomp_coefficient_row;

CXCOMP_API const char* cxcomp_version(void);
CXCOMP_API const char* cxcomp_status_string(cxcomp_status status);
/* Message of the last failing call on this thread; empty after a success. */
CXCOMP_API const char* cxcomp_last_error(void);

/* a1 and a2 as {re, im}. */
CXCOMP_API cxcomp_status cxcomp_pair_coefficients(int base_order, int branch, double a1[2], double a2[2]);
/* coefficients: `count` interleaved (re, im) pairs. */
CXCOMP_API cxcomp_status cxcomp_validate_conditions(const double* coefficients, size_t count, int base_order,
                                                    double* sum_residual, double* power_residual);
CXCOMP_API cxcomp_status cxcomp_triple_jump_coefficients(int base_order, double out[3]);
/* |S(z)| of a scheme label (BE2, HM1-SYM, ...); abs_s is +inf at a pole. */
CXCOMP_API cxcomp_status cxcomp_stability(const char* scheme, double re, double im, double* abs_s, int* in_region,
                                          int* in_intersection);
/* Lotka-Volterra orbit period for the default parameters. */
CXCOMP_API cxcomp_status cxcomp_lv_period(double* period);

/* kind: coeffs, ode-converge, ode-cpu, vortex, zalesak, stability. */
CXCOMP_API cxcomp_status cxcomp_config_create(const char* kind, cxcomp_config** out);
CXCOMP_API void cxcomp_config_destroy(cxcomp_config* config);
CXCOMP_API cxcomp_status cxcomp_config_load_file(cxcomp_config* config, const char* path);
CXCOMP_API cxcomp_status cxcomp_config_set(cxcomp_config* config, const char* key, const char* value);
CXCOMP_API cxcomp_status cxcomp_config_validate(const cxcomp_config* config);
/* Writes at most `capacity` bytes including the terminator; `needed` gets the full size. */
CXCOMP_API cxcomp_status cxcomp_config_to_text(const cxcomp_config* config, char* buffer, size_t capacity,
                                               size_t* needed);

/* A report is produced whenever the configuration is valid, even if cells failed. */
CXCOMP_API cxcomp_status cxcomp_run(const cxcomp_config* config, cxcomp_report** out);
CXCOMP_API void cxcomp_report_destroy(cxcomp_report* report);
/* 0 all cells succeeded, 2 partial failure. */
CXCOMP_API int cxcomp_report_exit_code(const cxcomp_report* report);
CXCOMP_API size_t cxcomp_report_row_count(const cxcomp_report* report);
CXCOMP_API cxcomp_status cxcomp_report_row(const cxcomp_report* report, size_t index, cxcomp_row* out);
CXCOMP_API size_t cxcomp_report_coefficient_count(const cxcomp_report* report);
CXCOMP_API cxcomp_status cxcomp_report_coefficient(const cxcomp_report* report, size_t index,
                                                   cxcomp_coefficient_row* out);
CXCOMP_API size_t cxcomp_report_metric_count(const cxcomp_report* report);
CXCOMP_API cxcomp_status cxcomp_report_metric(const cxcomp_report* report, size_t index, const char** name,
                                              double* value);
CXCOMP_API cxcomp_status cxcomp_report_metric_by_name(const cxcomp_report* report, const char* name,
                                                      double* value);
CXCOMP_API size_t cxcomp_report_file_count(const cxcomp_report* report);
CXCOMP_API const char* cxcomp_report_file(const cxcomp_report* report, size_t index);
/* Rows (or coefficient rows for coeffs) as CSV; "-" writes to stdout. */
CXCOMP_API cxcomp_status cxcomp_report_write_csv(const cxcomp_report* report, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CXCOMP_H */
