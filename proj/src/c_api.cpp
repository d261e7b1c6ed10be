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

#include "lap/lap.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "lap/error.hpp"
#include "lap/experiment.hpp"
#include "lap/oracles.hpp"
#include "lap/optimizer.hpp"
#include "lap/trace_io.hpp"
#include "lap/verify.hpp"

struct lap_problem {
  lap::QuadraticObjective objective;
};

struct lap_trace {
  lap::Trace trace;
  std::size_t n = 0;
};

namespace {

thread_local std::string g_last_error;

lap_status fail(lap_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, mapping exceptions to status codes.
template <typename Fn>
lap_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const lap::Error& e) {
    return fail(static_cast<lap_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LAP_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LAP_INTERNAL, e.what());
  } catch (...) {
    return fail(LAP_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lap::ExperimentOptions to_options(const lap_experiment_options* o) {
  lap::ExperimentOptions options;
  if (o) {
    options.seed_offset = o->seed_offset;
    options.jobs = o->jobs == 0 ? 1 : o->jobs;
    if (o->output_dir) options.output_dir = o->output_dir;
  }
  return options;
}

#define LAP_REQUIRE(cond, message) \
  do {                              \
    if (!(cond)) return fail(LAP_INVALID_ARGUMENT, message); \
  } while (0)

}  // namespace

extern "C" {

const char* lap_version(void) { return "0.1.0"; }

const char* lap_status_string(lap_status status) {
  return lap::error_code_name(static_cast<lap::ErrorCode>(status));
}

const char* lap_last_error(void) { return g_last_error.c_str(); }

void lap_string_free(char* s) { std::free(s); }

lap_status lap_problem_create_quadratic(size_t n, uint64_t seed, lap_problem** out) {
  LAP_REQUIRE(out, "out is NULL");
  return guarded([&] {
    *out = new lap_problem{lap::QuadraticObjective(lap::make_quadratic(n, seed))};
    return LAP_OK;
  });
}

lap_status lap_problem_load(const char* path, lap_problem** out) {
  LAP_REQUIRE(path && out, "path or out is NULL");
  return guarded([&] {
    *out = new lap_problem{lap::QuadraticObjective(lap::load_quadratic(path))};
    return LAP_OK;
  });
}

lap_status lap_problem_save(const lap_problem* problem, const char* path) {
  LAP_REQUIRE(problem && path, "problem or path is NULL");
  return guarded([&] {
    lap::save_quadratic(problem->objective.problem(), path);
    return LAP_OK;
  });
}

lap_status lap_problem_dimension(const lap_problem* problem, size_t* n) {
  LAP_REQUIRE(problem && n, "problem or n is NULL");
  *n = problem->objective.dim();
  return LAP_OK;
}

lap_status lap_problem_value(const lap_problem* problem, const double* x, size_t n, double* value) {
  LAP_REQUIRE(problem && x && value, "problem, x or value is NULL");
  if (n != problem->objective.dim()) return fail(LAP_DIMENSION_MISMATCH, "x has the wrong length");
  return guarded([&] {
    *value = problem->objective.value(std::span<const double>(x, n));
    return LAP_OK;
  });
}

lap_status lap_problem_optimum(const lap_problem* problem, double* x_star, size_t n, double* f_star) {
  LAP_REQUIRE(problem, "problem is NULL");
  const auto& p = problem->objective.problem();
  if (x_star) {
    if (n != p.n) return fail(LAP_DIMENSION_MISMATCH, "x_star has the wrong length");
    std::copy(p.x_star.begin(), p.x_star.end(), x_star);
  }
  if (f_star) *f_star = p.f_star;
  return LAP_OK;
}

void lap_problem_destroy(lap_problem* problem) { delete problem; }

lap_status lap_run(const lap_problem* problem, const char* run_config_json, lap_trace** out) {
  LAP_REQUIRE(problem && run_config_json && out, "problem, config or out is NULL");
  return guarded([&] {
    const std::size_t n = problem->objective.dim();
    const lap::RunConfig cfg = lap::parse_run_config(run_config_json, n);
    auto* t = new lap_trace{lap::run(problem->objective, cfg), n};
    *out = t;
    return LAP_OK;
  });
}

lap_status lap_trace_length(const lap_trace* trace, size_t* length) {
  LAP_REQUIRE(trace && length, "trace or length is NULL");
  *length = trace->trace.rows.size();
  return LAP_OK;
}

lap_status lap_trace_status(const lap_trace* trace, lap_run_status* status, size_t* failure_iteration) {
  LAP_REQUIRE(trace && status, "trace or status is NULL");
  switch (trace->trace.status) {
    case lap::RunStatus::kCompleted: *status = LAP_RUN_COMPLETED; break;
    case lap::RunStatus::kScheduleFailure: *status = LAP_RUN_SCHEDULE_FAILURE; break;
    case lap::RunStatus::kDiverged: *status = LAP_RUN_DIVERGED; break;
  }
  if (failure_iteration) *failure_iteration = trace->trace.failure_iteration.value_or(0);
  if (trace->trace.status == lap::RunStatus::kScheduleFailure) g_last_error = trace->trace.failure_message;
  return LAP_OK;
}

lap_status lap_trace_row_get(const lap_trace* trace, size_t index, lap_trace_row* row) {
  LAP_REQUIRE(trace && row, "trace or row is NULL");
  if (index >= trace->trace.rows.size()) return fail(LAP_INVALID_ARGUMENT, "row index out of range");
  const lap::TraceRow& r = trace->trace.rows[index];
  *row = lap_trace_row{};
  row->t = r.t;
  row->f = r.f;
  row->has_f_gap = r.f_gap.has_value();
  row->f_gap = r.f_gap.value_or(0.0);
  row->grad_norm2 = r.grad_norm2;
  row->grad_dual_norm_p = r.grad_dual_norm_p;
  row->alpha = r.alpha;
  row->beta = r.beta;
  row->mu = r.mu;
  row->has_delta = r.delta.has_value();
  row->delta = r.delta.value_or(0.0);
  row->lambda_min_p = r.lambda_min_p;
  row->has_wall_ns = r.wall_ns.has_value();
  row->wall_ns = r.wall_ns.value_or(0);
  return LAP_OK;
}

lap_status lap_trace_iterate(const lap_trace* trace, size_t index, double* x, size_t n) {
  LAP_REQUIRE(trace && x, "trace or x is NULL");
  if (n != trace->n) return fail(LAP_DIMENSION_MISMATCH, "x has the wrong length");
  const auto& its = trace->trace.iterates;
  if (index > its.size()) return fail(LAP_INVALID_ARGUMENT, "iterate index out of range");
  const lap::Vector& v = index == its.size() ? trace->trace.last_x : its[index];
  std::copy(v.begin(), v.end(), x);
  return LAP_OK;
}

lap_status lap_trace_best_running(const lap_trace* trace, double* b_running) {
  LAP_REQUIRE(trace && b_running, "trace or b_running is NULL");
  *b_running = trace->trace.b_running;
  return LAP_OK;
}

lap_status lap_trace_write_csv(const lap_trace* trace, const char* path) {
  LAP_REQUIRE(trace && path, "trace or path is NULL");
  return guarded([&] {
    std::ostringstream out;
    lap::write_trace_csv(trace->trace, out);
    lap::write_file_atomic(path, out.str());
    return LAP_OK;
  });
}

lap_status lap_trace_sample_output(const lap_trace* trace, uint64_t seed, size_t* index, double* x, size_t n) {
  LAP_REQUIRE(trace && index, "trace or index is NULL");
  if (x && n != trace->n) return fail(LAP_DIMENSION_MISMATCH, "x has the wrong length");
  return guarded([&] {
    lap::Rng rng = lap::make_rng(seed, 2);
    const lap::OutputSample s = lap::sample_output(trace->trace, rng);
    *index = s.t;
    if (x) std::copy(s.x.begin(), s.x.end(), x);
    return LAP_OK;
  });
}

void lap_trace_destroy(lap_trace* trace) { delete trace; }

lap_status lap_experiment_run(const char* config_path, const lap_experiment_options* options, char** json_out) {
  LAP_REQUIRE(config_path && json_out, "config_path or json_out is NULL");
  *json_out = nullptr;
  return guarded([&] {
    const auto cfg = lap::load_experiment_config(config_path);
    const auto result = lap::run_experiment(cfg, to_options(options));
    *json_out = copy_string(result.summary_json);
    if (result.any_schedule_failure) return fail(LAP_SCHEDULE_FAILURE, "at least one run stopped on a schedule failure");
    return LAP_OK;
  });
}

lap_status lap_experiment_grid(const char* config_path, const lap_experiment_options* options, char** json_out) {
  LAP_REQUIRE(config_path && json_out, "config_path or json_out is NULL");
  *json_out = nullptr;
  return guarded([&] {
    const auto cfg = lap::load_experiment_config(config_path);
    const auto result = lap::grid_search_alpha0(cfg, cfg.grid, to_options(options));
    *json_out = copy_string(result.grid_json);
    if (result.any_schedule_failure) return fail(LAP_SCHEDULE_FAILURE, "at least one run stopped on a schedule failure");
    return LAP_OK;
  });
}

lap_status lap_experiment_describe(const char* config_path, const lap_experiment_options* options, char** json_out) {
  LAP_REQUIRE(config_path && json_out, "config_path or json_out is NULL");
  *json_out = nullptr;
  return guarded([&] {
    const auto cfg = lap::load_experiment_config(config_path);
    *json_out = copy_string(lap::describe_experiment(cfg, to_options(options)));
    return LAP_OK;
  });
}

lap_status lap_verify_run(size_t trials, uint64_t seed, lap_report_callback callback, void* user,
                          int* all_as_expected) {
  return guarded([&] {
    lap::VerifyOptions options;
    options.trials = trials;
    options.seed = seed;
    bool ok = true;
    lap::run_verify_suite(options, [&](const lap::PropertyReport& r) {
      ok = ok && r.as_expected();
      if (callback) callback(lap::format_report(r).c_str(), r.passed ? 1 : 0, r.expect_pass ? 1 : 0, user);
    });
    if (all_as_expected) *all_as_expected = ok ? 1 : 0;
    return LAP_OK;
  });
}

}  // extern "C"
