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

#include "lap/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lap/error.hpp"
#include "lap/preconditioner.hpp"

namespace lap {

namespace {

using Clock = std::chrono::steady_clock;

bool is_thm1(const ScheduleSpec& s) {
  return s.step_rule.kind == StepRule::Kind::kThm1 || s.step_rule.kind == StepRule::Kind::kThm1Tight;
}

// Everything α_t may depend on besides P_t.
struct StepContext {
  const RunConfig* cfg = nullptr;
  double M = 0.0;
  std::size_t t = 0;
  double mu = 0.0;
  double delta = 0.0;
};

double step_size(const StepContext& c, double g_dual) {
  const ScheduleSpec& s = c.cfg->schedule;
  switch (s.step_rule.kind) {
    case StepRule::Kind::kThm1:
      return alpha_thm1(g_dual, c.delta, s.sigma_T, c.M, false);
    case StepRule::Kind::kThm1Tight:
      return alpha_thm1(g_dual, c.delta, s.sigma_T, c.M, true);
    case StepRule::Kind::kThm2:
      return alpha_thm2(g_dual, c.delta, s.sigma_T, c.M, c.cfg->gradient_noise.sigma_g, c.cfg->hessian_noise.sigma_h,
                        c.mu, c.cfg->T, s.constants);
    case StepRule::Kind::kInvSqrt:
      return alpha_inv_sqrt(s.step_rule.alpha0, c.t);
    case StepRule::Kind::kConstant:
      return s.step_rule.alpha0;
  }
  return s.step_rule.alpha0;
}

Vector initial_point(const Objective& obj, const RunConfig& cfg) {
  cfg.validate(obj.dim());
  Vector x0 = cfg.x0.empty() ? Vector(obj.dim(), 0.0) : cfg.x0;
  if (!cfg.feasible_set.contains(x0)) x0 = project(cfg.feasible_set, x0);
  return x0;
}

std::optional<double> r_value(const Objective& obj, const RunConfig& cfg, const Vector& x0) {
  const auto x_star = obj.minimizer();
  if (!x_star) return std::nullopt;
  const SpdOperator h0 = eigen_floor(obj.hessian(x0), cfg.hessian_noise.floor_mu);
  return mahalanobis_norm(h0, subtract(x0, *x_star));
}

void finish(Trace& trace, Clock::time_point start) {
  trace.wall_ns_total = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
  double best = std::numeric_limits<double>::infinity();
  trace.b_running = 0.0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    trace.b_running = std::max(trace.b_running, trace.rows[i].grad_dual_norm_p);
    if (trace.rows[i].f < best) {
      best = trace.rows[i].f;
      trace.best_index = i;
    }
  }
}

double safe_value(const Objective& obj, const Vector& x) {
  if (!all_finite(x)) return std::numeric_limits<double>::max();
  const double f = obj.value(x);
  return std::isfinite(f) ? f : std::numeric_limits<double>::max();
}

}  // namespace

const char* to_string(Algorithm algorithm) { return algorithm == Algorithm::kPlainSgd ? "plain_sgd" : "lap"; }

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "lap") return Algorithm::kLap;
  if (name == "plain_sgd") return Algorithm::kPlainSgd;
  throw ConfigError("algorithm", "unknown algorithm '" + name + "' (expected lap or plain_sgd)");
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kScheduleFailure: return "schedule_failure";
    case RunStatus::kDiverged: return "diverged";
  }
  return "completed";
}

void RunConfig::validate(std::size_t n, const std::string& path) const {
  if (T < 1) throw ConfigError(path + ".T", "must be at least 1");
  if (!x0.empty() && x0.size() != n)
    throw ConfigError(path + ".x0", "has " + std::to_string(x0.size()) + " entries, problem has " + std::to_string(n));
  if (!all_finite(x0)) throw ConfigError(path + ".x0", "must be finite");
  switch (feasible_set.kind()) {
    case FeasibleSet::Kind::kWholeSpace: break;
    case FeasibleSet::Kind::kBox:
      if (feasible_set.lower().size() != n) throw ConfigError(path + ".feasible_set", "box dimension mismatch");
      break;
    case FeasibleSet::Kind::kBall:
      if (feasible_set.center().size() != n) throw ConfigError(path + ".feasible_set", "ball dimension mismatch");
      break;
  }
  schedule.validate(path + ".schedule");
  if (algorithm == Algorithm::kPlainSgd && schedule.theorem_step_rule())
    throw ConfigError(path + ".schedule.step_rule", "plain_sgd supports only inv_sqrt and constant steps");
  if (!(gradient_noise.sigma_g >= 0.0)) throw ConfigError(path + ".gradient_noise.sigma_g", "must be non-negative");
  if (!(hessian_noise.sigma_h >= 0.0)) throw ConfigError(path + ".hessian_noise.sigma_h", "must be non-negative");
  if (!(hessian_noise.floor_mu > 0.0)) throw ConfigError(path + ".hessian_noise.floor_mu", "must be positive");
}

Trace run_lap(const Objective& obj, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::kLap) throw Error(ErrorCode::kInvalidArgument, "run_lap needs algorithm lap");
  const std::size_t n = obj.dim();
  const ScheduleSpec& spec = cfg.schedule;
  const double M = obj.hessian_lipschitz();
  const double sigma_h = cfg.hessian_noise.sigma_h;
  const auto f_star = obj.optimal_value();

  Trace trace;
  trace.run_name = cfg.name;
  trace.algorithm = Algorithm::kLap;
  trace.grad_norm_exact = cfg.exact_grad_norm;
  trace.rows.reserve(cfg.T);
  trace.iterates.reserve(cfg.T);
  trace.gradients.reserve(cfg.T);

  Vector x = initial_point(obj, cfg);
  trace.r_value = r_value(obj, cfg, x);

  Rng rng_g = make_rng(cfg.seed, 0);
  Rng rng_h = make_rng(cfg.seed, 1);
  LapState state = LapState::initial(n, spec.mu0);
  double mu_prev = spec.mu0;
  double delta_prev = 0.0;
  double alpha_prev = 0.0;
  double g_dual_prev = 0.0;

  const auto start = Clock::now();
  for (std::size_t t = 0; t < cfg.T; ++t) {
    const double f = obj.value(x);
    const Vector g = sample_gradient(obj, x, cfg.gradient_noise, rng_g);
    if (!std::isfinite(f) || !all_finite(g)) {
      trace.status = RunStatus::kDiverged;
      trace.failure_iteration = t;
      trace.failure_message = "non-finite objective or gradient";
      break;
    }
    const SpdOperator h = sample_hessian(obj, x, cfg.hessian_noise, rng_h);

    StepContext ctx{&cfg, M, t, spec.mu0, spec.delta_at(t, sigma_h)};
    double beta = 1.0;
    try {
      if (is_thm1(spec) && t > 0) ctx.mu = mu_thm1_next(mu_prev, delta_prev, alpha_prev, g_dual_prev, M, spec.sigma_T);
      const bool forced_first = t == 0 && spec.theorem_step_rule();
      if (!forced_first) {
        switch (spec.beta_rule.kind) {
          case BetaRule::Kind::kFixed:
            beta = spec.beta_rule.beta;
            break;
          case BetaRule::Kind::kThm2Bound:
            beta = t == 0 ? 1.0 : beta_thm2_lower(alpha_prev, g_dual_prev, M, spec.sigma_T, sigma_h,
                                                  state.residual_norm, t);
            break;
          case BetaRule::Kind::kBrentSearch: {
            const auto [lo, hi] = beta_interval(spec.beta_rule.interval, t);
            auto phi = [&](double b) {
              const SpdOperator p = averaged_preconditioner(state.p, h, b, ctx.mu);
              const double a = step_size(ctx, dual_norm(p, g));
              return safe_value(obj, prox_step(cfg.feasible_set, p, x, a, g, cfg.projection));
            };
            beta = brent_minimize(phi, lo, hi, spec.beta_rule.brent_tol, spec.beta_rule.brent_max_evals).x;
            break;
          }
        }
      }
    } catch (const ScheduleError& e) {
      trace.status = RunStatus::kScheduleFailure;
      trace.failure_iteration = t;
      trace.failure_message = e.what();
      break;
    }

    state.mu = ctx.mu;
    state.delta = ctx.delta;
    state = ema_update(state, h, beta);
    const double g_dual = dual_norm(state.p, g);
    double alpha = 0.0;
    try {
      alpha = step_size(ctx, g_dual);
    } catch (const ScheduleError& e) {
      trace.status = RunStatus::kScheduleFailure;
      trace.failure_iteration = t;
      trace.failure_message = e.what();
      break;
    }
    Vector x_next = prox_step(cfg.feasible_set, state.p, x, alpha, g, cfg.projection);

    TraceRow row;
    row.t = t;
    row.f = f;
    if (f_star) row.f_gap = f - *f_star;
    row.grad_norm2 = cfg.exact_grad_norm ? norm2(obj.gradient(x)) : norm2(g);
    row.grad_dual_norm_p = g_dual;
    row.alpha = alpha;
    row.beta = beta;
    row.mu = ctx.mu;
    row.delta = ctx.delta;
    row.lambda_min_p = min_eigenvalue(state.p.matrix());
    if (cfg.record_diagnostics) {
      const auto diag = precision_diagnostics(state, obj.hessian(x));
      row.delta_op_diag = diag.delta_op;
      row.delta_rel_diag = diag.delta_rel;
      trace.preconditioners.push_back(state.p.matrix());
    }
    if (cfg.record_wall_time)
      row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    trace.rows.push_back(row);
    trace.iterates.push_back(x);
    trace.gradients.push_back(g);

    mu_prev = ctx.mu;
    delta_prev = ctx.delta;
    alpha_prev = alpha;
    g_dual_prev = g_dual;

    if (!all_finite(x_next)) {
      trace.status = RunStatus::kDiverged;
      trace.failure_iteration = t;
      trace.failure_message = "non-finite iterate";
      break;
    }
    x = std::move(x_next);
  }
  trace.last_x = x;
  finish(trace, start);
  return trace;
}

Trace run_plain_sgd(const Objective& obj, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::kPlainSgd)
    throw Error(ErrorCode::kInvalidArgument, "run_plain_sgd needs algorithm plain_sgd");
  const std::size_t n = obj.dim();
  const auto f_star = obj.optimal_value();

  Trace trace;
  trace.run_name = cfg.name;
  trace.algorithm = Algorithm::kPlainSgd;
  trace.grad_norm_exact = cfg.exact_grad_norm;
  trace.rows.reserve(cfg.T);
  trace.iterates.reserve(cfg.T);
  trace.gradients.reserve(cfg.T);

  Vector x = initial_point(obj, cfg);
  trace.r_value = r_value(obj, cfg, x);

  Rng rng_g = make_rng(cfg.seed, 0);
  const SpdOperator identity = SpdOperator::identity(n);
  StepContext ctx{&cfg, 0.0, 0, 1.0, 0.0};

  const auto start = Clock::now();
  for (std::size_t t = 0; t < cfg.T; ++t) {
    const double f = obj.value(x);
    const Vector g = sample_gradient(obj, x, cfg.gradient_noise, rng_g);
    if (!std::isfinite(f) || !all_finite(g)) {
      trace.status = RunStatus::kDiverged;
      trace.failure_iteration = t;
      trace.failure_message = "non-finite objective or gradient";
      break;
    }
    ctx.t = t;
    const double alpha = step_size(ctx, norm2(g));
    Vector x_next = prox_step(cfg.feasible_set, identity, x, alpha, g, cfg.projection);

    TraceRow row;
    row.t = t;
    row.f = f;
    if (f_star) row.f_gap = f - *f_star;
    row.grad_norm2 = cfg.exact_grad_norm ? norm2(obj.gradient(x)) : norm2(g);
    row.grad_dual_norm_p = norm2(g);
    row.alpha = alpha;
    row.beta = 0.0;
    row.mu = 1.0;
    row.lambda_min_p = 1.0;
    if (cfg.record_diagnostics) {
      const SymmetricMatrix diff = obj.hessian(x) - identity.matrix();
      row.delta_op_diag = operator_norm(diff);
      row.delta_rel_diag = row.delta_op_diag;
      trace.preconditioners.push_back(identity.matrix());
    }
    if (cfg.record_wall_time)
      row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    trace.rows.push_back(row);
    trace.iterates.push_back(x);
    trace.gradients.push_back(g);

    if (!all_finite(x_next)) {
      trace.status = RunStatus::kDiverged;
      trace.failure_iteration = t;
      trace.failure_message = "non-finite iterate";
      break;
    }
    x = std::move(x_next);
  }
  trace.last_x = x;
  finish(trace, start);
  return trace;
}

Trace run(const Objective& obj, const RunConfig& cfg) {
  return cfg.algorithm == Algorithm::kLap ? run_lap(obj, cfg) : run_plain_sgd(obj, cfg);
}

std::size_t sample_output_index(const std::vector<double>& alphas, Rng& rng) {
  if (alphas.empty()) throw Error(ErrorCode::kInvalidArgument, "sample_output on an empty trace");
  double total = 0.0;
  for (double a : alphas) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::kInvalidArgument, "output weights must be finite");
    total += a;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "output weights sum to zero");
  // 53-bit uniform in [0, 1); portable across standard libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    acc += alphas[i];
    if (u < acc) return i;
  }
  for (std::size_t i = alphas.size(); i-- > 0;)
    if (alphas[i] > 0.0) return i;
  return alphas.size() - 1;
}

OutputSample sample_output(const Trace& trace, Rng& rng) {
  std::vector<double> alphas;
  alphas.reserve(trace.rows.size());
  for (const auto& row : trace.rows) alphas.push_back(row.alpha);
  const std::size_t t = sample_output_index(alphas, rng);
  return OutputSample{t, trace.iterates.at(t)};
}

double descent_lemma_violation(const Objective& obj, const DescentStep& step) {
  const SpdOperator p(step.p);
  const Vector grad = obj.gradient(step.x);
  const double f0 = obj.value(step.x);
  const double g_norm = dual_norm(p, grad);
  const double noise = dual_norm(p, subtract(grad, step.g));
  const double rhs = f0 - 0.5 * step.alpha * g_norm * g_norm + 1.5 * step.alpha * noise * noise;
  return (obj.value(step.x_next) - rhs) / std::max(1.0, std::abs(f0));
}

double descent_lemma_check(const Objective& obj, const std::vector<DescentStep>& steps) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : steps) worst = std::max(worst, descent_lemma_violation(obj, s));
  return worst;
}

std::vector<DescentStep> descent_steps(const Trace& trace) {
  if (trace.preconditioners.size() != trace.rows.size())
    throw Error(ErrorCode::kInvalidArgument, "descent_steps needs a trace recorded with diagnostics");
  std::vector<DescentStep> steps;
  steps.reserve(trace.rows.size());
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const Vector& next = i + 1 < trace.iterates.size() ? trace.iterates[i + 1] : trace.last_x;
    steps.push_back(DescentStep{trace.iterates[i], next, trace.preconditioners[i], trace.rows[i].alpha,
                                trace.gradients[i]});
  }
  return steps;
}

}  // namespace lap
