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

// SGD with LAP, the identity-preconditioned SGD baseline, and
// the randomized output rule.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lap/feasible_set.hpp"
#include "lap/linalg.hpp"
#include "lap/oracles.hpp"
#include "lap/rng.hpp"
#include "lap/schedules.hpp"

namespace lap {

enum class Algorithm { kLap, kPlainSgd };

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct RunConfig {
  std::string name = "run";
  Algorithm algorithm = Algorithm::kLap;
  std::size_t T = 1;
  Vector x0;  // empty means the origin
  FeasibleSet feasible_set;
  ProjectionMetric projection = ProjectionMetric::kPreconditioner;
  ScheduleSpec schedule;
  GradientNoiseModel gradient_noise;
  HessianNoiseModel hessian_noise;
  std::uint64_t seed = 0;
  bool record_diagnostics = false;  // exact-Hessian precision and stored P_t
  bool record_wall_time = false;    // off keeps CSVs bit-reproducible
  bool exact_grad_norm = true;      // grad_norm2 from ∇f when available, else from g_t

  // Throws ConfigError with the field path.
  void validate(std::size_t n, const std::string& path = "run") const;
};

struct TraceRow {
  std::size_t t = 0;
  double f = 0.0;
  std::optional<double> f_gap;
  double grad_norm2 = 0.0;
  double grad_dual_norm_p = 0.0;  // ‖g_t‖*_{P_t}
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  std::optional<double> delta;  // blank for plain SGD
  double lambda_min_p = 0.0;
  std::optional<double> delta_op_diag;   // ‖∇²f(x_t) − P_t‖_op
  std::optional<double> delta_rel_diag;  // ‖∇²f(x_t) − P_t‖_{op,P_t}
  std::optional<std::int64_t> wall_ns;
};

enum class RunStatus { kCompleted, kScheduleFailure, kDiverged };
const char* to_string(RunStatus status);

struct Trace {
  std::string run_name;
  Algorithm algorithm = Algorithm::kLap;
  RunStatus status = RunStatus::kCompleted;
  std::optional<std::size_t> failure_iteration;
  std::string failure_message;

  std::vector<TraceRow> rows;
  std::vector<Vector> iterates;             // x_t for each row
  std::vector<Vector> gradients;            // g_t for each row
  std::vector<SymmetricMatrix> preconditioners;  // P_t, only with record_diagnostics
  Vector last_x;                            // x_T (or the last finite iterate)
  std::size_t best_index = 0;               // arg min of f over the rows
  double b_running = 0.0;                   // max_t ‖g_t‖*_{P_t}
  std::optional<double> r_value;            // ‖x_0 − x*‖_{H_0}
  bool grad_norm_exact = false;
  std::int64_t wall_ns_total = 0;

  const Vector& best_x() const { return iterates.at(best_index); }
};

Trace run_lap(const Objective& obj, const RunConfig& cfg);
Trace run_plain_sgd(const Objective& obj, const RunConfig& cfg);
// Dispatches on cfg.algorithm.
Trace run(const Objective& obj, const RunConfig& cfg);

struct OutputSample {
  std::size_t t = 0;
  Vector x;
};

// t drawn with probability α_t / Σ α_k.
std::size_t sample_output_index(const std::vector<double>& alphas, Rng& rng);
OutputSample sample_output(const Trace& trace, Rng& rng);

struct DescentStep {
  Vector x;
  Vector x_next;
  SymmetricMatrix p;
  double alpha = 0.0;
  Vector g;
};

// f(x⁺) − [f(x) − (α/2)(‖∇f(x)‖*_P)² + (3α/2)(‖∇f(x) − g‖*_P)²],
// divided by max(1, |f(x)|).
double descent_lemma_violation(const Objective& obj, const DescentStep& step);
double descent_lemma_check(const Objective& obj, const std::vector<DescentStep>& steps);
// Steps rebuilt from a trace recorded with record_diagnostics.
std::vector<DescentStep> descent_steps(const Trace& trace);

}  // namespace lap
