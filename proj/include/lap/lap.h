// Copyright 2026 The LAP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the LAP library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a lap_status; on failure lap_last_error() describes
 * the problem for the calling thread until its next failing call.
 * Strings returned through char** are owned by the caller and released with
 * lap_string_free. */

#ifndef LAP_LAP_H_
#define LAP_LAP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LAP_BUILDING_LIBRARY)
#define LAP_API __declspec(dllexport)
#else
#define LAP_API __declspec(dllimport)
#endif
#else
#define LAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lap_status {
  LAP_OK = 0,
  LAP_INVALID_ARGUMENT = 1,
  LAP_DIMENSION_MISMATCH = 2,
  LAP_NOT_POSITIVE_DEFINITE = 3,
  LAP_NEGATIVE_QUADRATIC_FORM = 4,
  LAP_NON_POSITIVE_DELTA = 5,
  LAP_NON_POSITIVE_INPUT = 6,
  LAP_NON_POSITIVE_DENOMINATOR = 7,
  LAP_INVALID_BRACKET = 8,
  LAP_SCHEDULE_FAILURE = 9,
  LAP_CONFIG_ERROR = 10,
  LAP_IO_ERROR = 11,
  LAP_INTERNAL = 12
} lap_status;

typedef enum lap_run_status {
  LAP_RUN_COMPLETED = 0,
  LAP_RUN_SCHEDULE_FAILURE = 1,
  LAP_RUN_DIVERGED = 2
} lap_run_status;

typedef struct lap_problem lap_problem;
typedef struct lap_trace lap_trace;

/* One trace row. has_* flags mark the optional columns. */
typedef struct lap_trace_row {
  size_t t;
  double f;
  double f_gap;
  int has_f_gap;
  double grad_norm2;
  double grad_dual_norm_p;
  double alpha;
  double beta;
  double mu;
  double delta;
  int has_delta;
  double lambda_min_p;
  int64_t wall_ns;
  int has_wall_ns;
} lap_trace_row;

typedef struct lap_experiment_options {
  uint64_t seed_offset;
  unsigned jobs;          /* 0 is treated as 1 */
  const char* output_dir; /* NULL keeps the config's directory */
} lap_experiment_options;

typedef void (*lap_report_callback)(const char* line, int passed, int expect_pass, void* user);

LAP_API const char* lap_version(void);
LAP_API const char* lap_status_string(lap_status status);
LAP_API const char* lap_last_error(void);
LAP_API void lap_string_free(char* s);

/* Quadratic test problems f(x) = <Ax, x> - <b, x>. */
LAP_API lap_status lap_problem_create_quadratic(size_t n, uint64_t seed, lap_problem** out);
LAP_API lap_status lap_problem_load(const char* path, lap_problem** out);
LAP_API lap_status lap_problem_save(const lap_problem* problem, const char* path);
LAP_API lap_status lap_problem_dimension(const lap_problem* problem, size_t* n);
LAP_API lap_status lap_problem_value(const lap_problem* problem, const double* x, size_t n, double* value);
/* x_star may be NULL when only f_star is wanted. */
LAP_API lap_status lap_problem_optimum(const lap_problem* problem, double* x_star, size_t n, double* f_star);
LAP_API void lap_problem_destroy(lap_problem* problem);

/* run_config_json is one run object as in the experiment config "runs" list.
 * A run stopped by a schedule failure or divergence still yields a trace
 * (with LAP_OK); inspect it with lap_trace_status. */
LAP_API lap_status lap_run(const lap_problem* problem, const char* run_config_json, lap_trace** out);
LAP_API lap_status lap_trace_length(const lap_trace* trace, size_t* length);
LAP_API lap_status lap_trace_status(const lap_trace* trace, lap_run_status* status, size_t* failure_iteration);
LAP_API lap_status lap_trace_row_get(const lap_trace* trace, size_t index, lap_trace_row* row);
LAP_API lap_status lap_trace_iterate(const lap_trace* trace, size_t index, double* x, size_t n);
LAP_API lap_status lap_trace_best_running(const lap_trace* trace, double* b_running);
LAP_API lap_status lap_trace_write_csv(const lap_trace* trace, const char* path);
/* Draws t with probability alpha_t / sum(alpha); x may be NULL. */
LAP_API lap_status lap_trace_sample_output(const lap_trace* trace, uint64_t seed, size_t* index, double* x, size_t n);
LAP_API void lap_trace_destroy(lap_trace* trace);

/* Experiments from a config file. The JSON document (summary, grid table or
 * resolved config) is returned through *json_out even when the status is
 * LAP_SCHEDULE_FAILURE, which signals that at least one run stopped early. */
LAP_API lap_status lap_experiment_run(const char* config_path, const lap_experiment_options* options,
                                      char** json_out);
LAP_API lap_status lap_experiment_grid(const char* config_path, const lap_experiment_options* options,
                                       char** json_out);
LAP_API lap_status lap_experiment_describe(const char* config_path, const lap_experiment_options* options,
                                           char** json_out);

/* Property suite. *all_as_expected is 1 when every check passed and every
 * negative control failed. */
LAP_API lap_status lap_verify_run(size_t trials, uint64_t seed, lap_report_callback callback, void* user,
                                  int* all_as_expected);

#ifdef __cplusplus
}
#endif

#endif /* LAP_LAP_H_ */
