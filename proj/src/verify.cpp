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

#include "lap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <random>

#include "lap/error.hpp"
#include "lap/feasible_set.hpp"
#include "lap/optimizer.hpp"

namespace lap {

namespace {

constexpr double kTiny = 1e-300;

Vector gaussian_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t random_dim(Rng& rng) { return 2 + static_cast<std::size_t>(rng() % 7); }  // 2..8

FeasibleSet random_set(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (rng() % 2 == 0) {
    Vector lower(n), upper(n);
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = normal(rng);
      const double width = uniform01(rng) < 0.1 ? 0.0 : std::exp(normal(rng));
      upper[i] = lower[i] + width;
    }
    return FeasibleSet::box(std::move(lower), std::move(upper));
  }
  return FeasibleSet::ball(gaussian_vector(n, rng), std::exp(normal(rng)));
}

Vector random_point_in(const FeasibleSet& q, std::size_t n, Rng& rng) {
  Vector x(n);
  if (q.kind() == FeasibleSet::Kind::kBox) {
    for (std::size_t i = 0; i < n; ++i) x[i] = q.lower()[i] + uniform01(rng) * (q.upper()[i] - q.lower()[i]);
    return x;
  }
  Vector u = gaussian_vector(n, rng);
  const double r = q.radius() * uniform01(rng) / std::max(norm2(u), kTiny);
  return add_scaled(q.center(), r, u);
}

// f(x) = (c/6)Σx_i³ + ½‖x‖². The cubic upper bound is attained along the coordinate axes with
// M = c and T = I, so an understated M is caught by random directions.
class SeparableCubic final : public Objective {
 public:
  SeparableCubic(std::size_t n, double c) : n_(n), c_(c) {}
  std::size_t dim() const override { return n_; }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (double v : x) s += c_ / 6.0 * v * v * v + 0.5 * v * v;
    return s;
  }
  Vector gradient(std::span<const double> x) const override {
    Vector g(n_);
    for (std::size_t i = 0; i < n_; ++i) g[i] = 0.5 * c_ * x[i] * x[i] + x[i];
    return g;
  }
  SymmetricMatrix hessian(std::span<const double> x) const override {
    SymmetricMatrix h(n_);
    for (std::size_t i = 0; i < n_; ++i) h.set(i, i, c_ * x[i] + 1.0);
    return h;
  }
  double hessian_lipschitz() const override { return c_; }

 private:
  std::size_t n_;
  double c_;
};

std::unique_ptr<Objective> make_objective(const std::string& kind, std::uint64_t seed) {
  if (kind == "quadratic") return std::make_unique<QuadraticObjective>(make_quadratic(10, seed));
  if (kind == "logsumexp") return std::make_unique<LogSumExpObjective>(LogSumExpObjective::random(10, 1.0, seed));
  throw Error(ErrorCode::kInvalidArgument, "unknown verification objective '" + kind + "'");
}

}  // namespace

PropertyReport make_report(std::string name, std::size_t trials, double max_violation, double tolerance,
                           bool expect_pass) {
  PropertyReport r;
  r.name = std::move(name);
  r.trials = trials;
  r.max_violation = max_violation;
  r.tolerance = tolerance;
  r.passed = max_violation <= tolerance;
  r.expect_pass = expect_pass;
  return r;
}

std::string format_report(const PropertyReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-40s trials=%-6zu max_violation=%-12.4e tol=%-10.3e %s%s", r.name.c_str(),
                r.trials, r.max_violation, r.tolerance, r.passed ? "PASS" : "FAIL",
                r.expect_pass ? "" : (r.passed ? " (negative control, expected FAIL)" : " (negative control)"));
  return buf;
}

SymmetricMatrix random_spd(std::size_t n, Rng& rng, double lo, double hi) {
  if (!(lo > 0.0 && lo <= hi)) throw Error(ErrorCode::kInvalidArgument, "random_spd: need 0 < lo <= hi");
  // Modified Gram-Schmidt on a Gaussian matrix; columns of q are orthonormal.
  std::vector<Vector> q;
  while (q.size() < n) {
    Vector v = gaussian_vector(n, rng);
    for (const auto& u : q) v = add_scaled(v, -dot(u, v), u);
    const double len = norm2(v);
    if (len < 1e-8) continue;
    q.push_back(scaled(v, 1.0 / len));
  }
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  Vector d(n);
  for (double& l : d) l = std::exp(log_lo + (log_hi - log_lo) * uniform01(rng));
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q[k][i] * d[k] * q[k][j];
      m.set(i, j, s);
    }
  return m;
}

PropertyReport check_cubic_bound(std::size_t trials, Rng& rng, bool with_correction) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials; ++k) {
    const std::size_t n = random_dim(rng);
    const SpdOperator p(random_spd(n, rng));
    const SpdOperator t_metric = (k % 50 == 0) ? p : SpdOperator(random_spd(n, rng));
    const Vector g = (k % 97 == 0) ? Vector(n, 0.0) : gaussian_vector(n, rng);
    const double lhs = std::pow(mahalanobis_norm(t_metric, p.solve(g)), 3.0);
    const double gd = dual_norm(p, g);
    double factor = 1.5;
    if (with_correction) {
      const double disc = relative_operator_norm(t_metric.matrix() - p.matrix(), p);
      factor *= 1.0 + std::pow(disc, 1.5);
    }
    const double rhs = factor * gd * gd * gd;
    worst = std::max(worst, (lhs - rhs) / std::max(rhs, kTiny));
  }
  return make_report(with_correction ? "cubic_bound" : "cubic_bound_uncorrected", trials, worst, 1e-9,
                     with_correction);
}

std::vector<PropertyReport> check_projection_lemmas(std::size_t trials, Rng& rng, ProjectionMetric metric) {
  double worst_exp = -std::numeric_limits<double>::infinity();
  double worst_dir = worst_exp;
  double worst_len = worst_exp;
  for (std::size_t k = 0; k < trials; ++k) {
    const std::size_t n = random_dim(rng);
    const FeasibleSet q = (k % 100 == 0) ? FeasibleSet::whole_space() : random_set(n, rng);
    const Vector x = q.kind() == FeasibleSet::Kind::kWholeSpace ? gaussian_vector(n, rng) : random_point_in(q, n, rng);

    const Vector y = add(x, gaussian_vector(n, rng, 3.0));
    const double moved = norm2(subtract(project(q, y), x));
    const double base = norm2(subtract(y, x));
    worst_exp = std::max(worst_exp, (moved - base) / std::max(1.0, base));

    const SpdOperator p(random_spd(n, rng));
    const Vector g = gaussian_vector(n, rng);
    const Vector d = gaussian_vector(n, rng);
    const Vector step = add_scaled(x, -1.0, p.solve(g));
    const Vector proj = metric == ProjectionMetric::kEuclidean ? project(q, step) : project_metric(q, p, step);
    const double gd = dual_norm(p, g);
    const double dd = dual_norm(p, d);
    const double dir = dot(g, subtract(proj, step));
    worst_dir = std::max(worst_dir, -dir / std::max(gd * gd, kTiny));
    const double len = std::abs(dot(d, subtract(step, proj)));
    worst_len = std::max(worst_len, (len - dd * gd) / std::max(dd * gd, kTiny));
  }
  const bool metric_form = metric == ProjectionMetric::kPreconditioner;
  const std::string suffix = metric_form ? "" : "_euclidean";
  return {make_report("proj_nonexpansive", trials, worst_exp, 1e-12),
          make_report("proj_direction" + suffix, trials, worst_dir, 1e-10, metric_form),
          make_report("proj_length" + suffix, trials, worst_len, 1e-10, metric_form)};
}

PropertyReport check_brackets(std::size_t trials, Rng& rng, bool squared) {
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const std::size_t n = random_dim(rng);
    const SpdOperator p(random_spd(n, rng));
    const Vector a = gaussian_vector(n, rng);
    const Vector b = gaussian_vector(n, rng);
    const double lhs = -dot(a, p.solve(b));
    const double da = dual_norm(p, a);
    const double db = dual_norm(p, b);
    const double dab = dual_norm(p, subtract(a, b));
    const double rhs = squared ? -0.5 * da * da - 0.5 * db * db + 0.5 * dab * dab : -0.5 * da - 0.5 * db + 0.5 * dab;
    const double scale = std::max(da * da + db * db + dab * dab, kTiny);
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return make_report(squared ? "brackets_squared" : "brackets_unsquared", trials, worst, 1e-9, squared);
}

std::vector<PropertyReport> check_finite_differences(const Objective& obj, std::size_t points, Rng& rng,
                                                     const std::string& label, double grad_tol, double hess_tol) {
  const std::size_t n = obj.dim();
  const double h = 1e-5;
  double worst_g = 0.0;
  double worst_h = 0.0;
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (std::size_t k = 0; k < points; ++k) {
    Vector x(n);
    for (double& v : x) v = box(rng);
    const Vector g = obj.gradient(x);
    const SymmetricMatrix hess = obj.hessian(x);
    Vector fd(n);
    double h_err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      fd[j] = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
      const Vector gp = obj.gradient(xp);
      const Vector gm = obj.gradient(xm);
      for (std::size_t i = 0; i < n; ++i) {
        const double e = (gp[i] - gm[i]) / (2.0 * h) - hess(i, j);
        h_err += e * e;
      }
    }
    worst_g = std::max(worst_g, norm2(subtract(fd, g)) / std::max(1.0, norm2(g)));
    worst_h = std::max(worst_h, std::sqrt(h_err) / std::max(1.0, hess.frobenius_norm()));
  }
  return {make_report("fd_gradient_" + label, points, worst_g, grad_tol),
          make_report("fd_hessian_" + label, points, worst_h, hess_tol)};
}

PropertyReport check_hessian_lipschitz(const Objective& obj, std::size_t trials, Rng& rng, const std::string& label,
                                       double m_scale) {
  const std::size_t n = obj.dim();
  const double M = m_scale * obj.hessian_lipschitz();
  double worst = -std::numeric_limits<double>::infinity();
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> log_r(std::log(1e-3), std::log(10.0));
  for (std::size_t k = 0; k < trials; ++k) {
    Vector x(n);
    for (double& v : x) v = box(rng);
    Vector u = gaussian_vector(n, rng);
    u = scaled(u, std::exp(log_r(rng)) / norm2(u));
    const Vector y = add(x, u);
    const SymmetricMatrix hess = obj.hessian(x);
    const double fx = obj.value(x);
    const double fy = obj.value(y);
    const double model = fx + dot(obj.gradient(x), u) + 0.5 * dot(u, hess.apply(u));
    const double r = mahalanobis_norm(obj.metric(x), u);
    const double slack = model + M / 6.0 * r * r * r - fy;
    worst = std::max(worst, -slack / std::max(1.0, std::abs(fy)));
  }
  const bool understated = m_scale < 1.0;
  return make_report("hessian_lipschitz_" + label + (understated ? "_understated" : ""), trials, worst, 1e-9,
                     !understated);
}

PropertyReport check_descent_lemma(const std::string& objective, std::size_t steps, std::size_t seeds,
                                   std::uint64_t seed0) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto obj = make_objective(objective, seed0 + s);
    RunConfig cfg;
    cfg.name = "descent_" + objective;
    cfg.T = steps;
    cfg.seed = seed0 + s;
    cfg.schedule.step_rule.kind = StepRule::Kind::kThm1Tight;
    cfg.schedule.beta_rule.kind = BetaRule::Kind::kFixed;
    cfg.schedule.beta_rule.beta = 1.0;
    // T = I and P ⪰ I for the regularized log-sum-exp, so ‖I − P‖_{op,P} < 1.
    cfg.schedule.sigma_T = objective == "logsumexp" ? 1.0 : 0.0;
    cfg.record_diagnostics = true;
    Rng rng = make_rng(seed0 + s, 7);
    cfg.x0 = gaussian_vector(obj->dim(), rng);
    const Trace trace = run_lap(*obj, cfg);
    if (trace.status != RunStatus::kCompleted) return make_report("descent_lemma_" + objective, s, INFINITY, 1e-9);
    worst = std::max(worst, descent_lemma_check(*obj, descent_steps(trace)));
  }
  return make_report("descent_lemma_" + objective, steps * seeds, worst, 1e-9);
}

std::vector<PropertyReport> check_oracle_contracts(std::size_t gradient_samples, std::size_t hessian_draws,
                                                   Rng& rng) {
  const QuadraticObjective obj(make_quadratic(10, 7));
  const Vector x = gaussian_vector(obj.dim(), rng);
  const Vector exact = obj.gradient(x);

  const GradientNoiseModel noise_g{GradientNoiseModel::Kind::kGaussianUnbiased, 0.5};
  Vector mean(obj.dim(), 0.0);
  for (std::size_t k = 0; k < gradient_samples; ++k) mean = add(mean, subtract(sample_gradient(obj, x, noise_g, rng), exact));
  mean = scaled(mean, 1.0 / static_cast<double>(gradient_samples));
  const double bias_tol = 4.0 * noise_g.sigma_g / std::sqrt(static_cast<double>(gradient_samples));

  const HessianNoiseModel noise_h{1.0, 0.009};
  double worst_norm = 0.0;
  double worst_floor = -std::numeric_limits<double>::infinity();
  double h_scale = 1.0;
  for (std::size_t k = 0; k < hessian_draws; ++k) {
    const HessianSample s = sample_hessian_detailed(obj, x, noise_h, rng);
    worst_norm = std::max(worst_norm, operator_norm(s.perturbation));
    worst_floor = std::max(worst_floor, noise_h.floor_mu - min_eigenvalue(s.approximation.matrix()));
    h_scale = std::max(h_scale, operator_norm(s.approximation.matrix()));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {make_report("oracle_gradient_bias", gradient_samples, norm2(mean), bias_tol),
          make_report("oracle_hessian_perturbation", hessian_draws, worst_norm, noise_h.sigma_h * (1.0 + 64.0 * eps)),
          make_report("oracle_hessian_floor", hessian_draws, worst_floor, 64.0 * eps * h_scale)};
}

std::vector<PropertyReport> run_verify_suite(const VerifyOptions& options,
                                             const std::function<void(const PropertyReport&)>& on_report) {
  std::vector<PropertyReport> reports;
  auto emit = [&](PropertyReport r) {
    if (on_report) on_report(r);
    reports.push_back(std::move(r));
  };
  const std::size_t trials = std::max<std::size_t>(options.trials, 1);
  const std::size_t points = std::min<std::size_t>(trials, 200);
  std::uint64_t stream = 100;
  auto rng_for = [&]() { return make_rng(options.seed, stream++); };

  {
    Rng rng = rng_for();
    emit(check_cubic_bound(trials, rng, true));
  }
  {
    Rng rng = rng_for();
    emit(check_cubic_bound(trials, rng, false));
  }
  {
    Rng rng = rng_for();
    for (auto& r : check_projection_lemmas(trials, rng, ProjectionMetric::kPreconditioner)) emit(std::move(r));
  }
  {
    Rng rng = rng_for();
    auto euclid = check_projection_lemmas(trials, rng, ProjectionMetric::kEuclidean);
    emit(std::move(euclid[1]));
    emit(std::move(euclid[2]));
  }
  {
    Rng rng = rng_for();
    emit(check_brackets(trials, rng, true));
  }
  {
    Rng rng = rng_for();
    emit(check_brackets(trials, rng, false));
  }

  const QuadraticObjective quad(make_quadratic(10, options.seed));
  const LogSumExpObjective lse = LogSumExpObjective::random(10, 1.0, options.seed);
  {
    Rng rng = rng_for();
    for (auto& r : check_finite_differences(quad, points, rng, "quadratic")) emit(std::move(r));
  }
  {
    Rng rng = rng_for();
    for (auto& r : check_finite_differences(lse, points, rng, "logsumexp")) emit(std::move(r));
  }
  {
    Rng rng = rng_for();
    emit(check_hessian_lipschitz(quad, trials, rng, "quadratic"));
  }
  {
    Rng rng = rng_for();
    emit(check_hessian_lipschitz(lse, trials, rng, "logsumexp"));
  }
  const SeparableCubic cubic(10, 1.0);
  {
    Rng rng = rng_for();
    emit(check_hessian_lipschitz(cubic, trials, rng, "cubic"));
  }
  {
    Rng rng = rng_for();
    emit(check_hessian_lipschitz(cubic, trials, rng, "cubic", 0.1));
  }
  emit(check_descent_lemma("quadratic", 100, 20, options.seed));
  emit(check_descent_lemma("logsumexp", 100, 20, options.seed));
  {
    Rng rng = rng_for();
    for (auto& r : check_oracle_contracts(100000, 1000, rng)) emit(std::move(r));
  }
  return reports;
}

}  // namespace lap
