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

#include "lap/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lap/error.hpp"

namespace lap {

namespace {

constexpr double kIntervalEps = 1e-6;

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) throw ScheduleError(ErrorCode::kNonPositiveInput, std::string(name) + " must be non-negative");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ScheduleError(ErrorCode::kNonPositiveInput, std::string(name) + " must be positive");
}

}  // namespace

bool ScheduleSpec::theorem_step_rule() const noexcept {
  return step_rule.kind == StepRule::Kind::kThm1 || step_rule.kind == StepRule::Kind::kThm1Tight ||
         step_rule.kind == StepRule::Kind::kThm2;
}

void ScheduleSpec::validate(const std::string& path) const {
  const auto& c = constants;
  if (!(c.c1 > 0.0 && c.c1 < 1.0)) throw ConfigError(path + ".c1", "must lie in (0, 1)");
  if (!(c.c2 > 0.0)) throw ConfigError(path + ".c2", "must be positive");
  if (!(c.c3 > 0.0)) throw ConfigError(path + ".c3", "must be positive");
  if (!(sigma_T >= 0.0)) throw ConfigError(path + ".sigma_T", "must be non-negative");
  if (!(mu0 > 0.0)) throw ConfigError(path + ".mu0", "must be positive");
  if (delta0 && !(*delta0 > 0.0)) throw ConfigError(path + ".delta0", "must be positive");
  if (!(delta_decay.exponent > 0.0)) throw ConfigError(path + ".delta_decay.exponent", "must be positive");
  if ((step_rule.kind == StepRule::Kind::kInvSqrt || step_rule.kind == StepRule::Kind::kConstant) &&
      !(step_rule.alpha0 > 0.0))
    throw ConfigError(path + ".step_rule.alpha0", "must be positive");
  if (beta_rule.kind == BetaRule::Kind::kFixed && !(beta_rule.beta >= 0.0 && beta_rule.beta <= 1.0))
    throw ConfigError(path + ".beta_rule.beta", "must lie in [0, 1]");
  if (beta_rule.kind == BetaRule::Kind::kBrentSearch) {
    if (!(beta_rule.brent_tol > 0.0)) throw ConfigError(path + ".beta_rule.tol", "must be positive");
    if (beta_rule.brent_max_evals < 3) throw ConfigError(path + ".beta_rule.max_evals", "must be at least 3");
  }
}

double ScheduleSpec::resolved_delta0(double sigma_h) const {
  if (delta0) return *delta0;
  return sigma_h > 0.0 ? sigma_h / mu0 : 1.0;
}

double ScheduleSpec::delta_at(std::size_t t, double sigma_h) const {
  return resolved_delta0(sigma_h) / std::pow(1.0 + static_cast<double>(t), delta_decay.exponent);
}

const char* to_string(StepRule::Kind kind) {
  switch (kind) {
    case StepRule::Kind::kThm1: return "thm1";
    case StepRule::Kind::kThm1Tight: return "thm1_tight";
    case StepRule::Kind::kThm2: return "thm2";
    case StepRule::Kind::kInvSqrt: return "inv_sqrt";
    case StepRule::Kind::kConstant: return "constant";
  }
  return "thm1_tight";
}

const char* to_string(BetaRule::Kind kind) {
  switch (kind) {
    case BetaRule::Kind::kFixed: return "fixed";
    case BetaRule::Kind::kThm2Bound: return "thm2_bound";
    case BetaRule::Kind::kBrentSearch: return "brent_search";
  }
  return "fixed";
}

const char* to_string(BetaInterval interval) { return interval == BetaInterval::kTail ? "tail" : "unit"; }

double alpha_thm1(double g_dual_norm, double delta_t, double sigma_T, double M, bool tight) {
  if (!(delta_t > 0.0)) throw ScheduleError(ErrorCode::kNonPositiveDelta, "delta_t must be positive");
  require_nonnegative(g_dual_norm, "g_dual_norm");
  require_nonnegative(sigma_T, "sigma_T");
  require_nonnegative(M, "M");
  const double root = std::sqrt(M * g_dual_norm);
  const double denom = tight ? 1.0 + (1.0 + 0.75 * root) * delta_t + root * (0.75 * sigma_T + 1.25)
                             : 1.0 + (1.0 + root) * delta_t + root * (sigma_T + 2.0);
  return 1.0 / denom;
}

double mu_thm1_next(double mu_prev, double delta_prev, double alpha_prev, double g_prev_dual_norm, double M,
                    double sigma_T) {
  require_positive(mu_prev, "mu_prev");
  require_positive(delta_prev, "delta_prev");
  require_nonnegative(alpha_prev, "alpha_prev");
  require_nonnegative(g_prev_dual_norm, "g_prev_dual_norm");
  require_nonnegative(M, "M");
  require_nonnegative(sigma_T, "sigma_T");
  const double inv_prev = 1.0 / mu_prev;
  const double growth = M * alpha_prev * g_prev_dual_norm * (1.0 + std::sqrt(sigma_T)) / delta_prev;
  return 1.0 / (inv_prev + growth + 1e-13 * inv_prev);
}

double alpha_thm2_curvature(double g_dual_norm, double delta_t, double sigma_T, double c1) {
  require_nonnegative(g_dual_norm, "g_dual_norm");
  require_nonnegative(delta_t, "delta_t");
  require_nonnegative(sigma_T, "sigma_T");
  if (!(c1 > 0.0 && c1 < 1.0)) throw ScheduleError(ErrorCode::kNonPositiveInput, "c1 must lie in (0, 1)");
  const double gamma = (1.0 + delta_t) / c1 + std::pow(g_dual_norm, 0.75) * (1.0 + std::pow(delta_t + sigma_T, 0.75));
  return 1.0 / gamma;
}

double alpha_thm2_horizon(double sigma_T, double M, double sigma_g, double sigma_H, double mu, std::size_t T_total,
                          const ScheduleConstants& k) {
  if (T_total < 1) throw ScheduleError(ErrorCode::kNonPositiveInput, "T must be at least 1");
  require_positive(mu, "mu");
  require_nonnegative(M, "M");
  require_nonnegative(sigma_g, "sigma_g");
  require_nonnegative(sigma_H, "sigma_H");
  require_nonnegative(sigma_T, "sigma_T");
  const double per_step = sigma_g * sigma_g / (mu * (1.0 - k.c1)) + M / 2.0;
  if (!(per_step > 0.0)) {
    throw ScheduleError(ErrorCode::kNonPositiveDenominator,
                        "horizon step bound needs sigma_g > 0 or M > 0; use the curvature bound alone");
  }
  const double numer = 2.0 * k.c3 * sigma_H + k.c3 * M * (1.0 + std::sqrt(sigma_T)) + k.c2 + 1.0;
  return std::sqrt(numer / (static_cast<double>(T_total) * per_step));
}

double alpha_thm2(double g_dual_norm, double delta_t, double sigma_T, double M, double sigma_g, double sigma_H,
                  double mu, std::size_t T_total, const ScheduleConstants& constants) {
  return std::min(alpha_thm2_curvature(g_dual_norm, delta_t, sigma_T, constants.c1),
                  alpha_thm2_horizon(sigma_T, M, sigma_g, sigma_H, mu, T_total, constants));
}

double beta_thm2_lower(double alpha_prev, double g_prev_dual_norm, double M, double sigma_T, double sigma_H,
                       double update_norm_prev, std::size_t t) {
  if (t < 1) throw ScheduleError(ErrorCode::kNonPositiveInput, "beta_thm2_lower needs t >= 1");
  require_nonnegative(alpha_prev, "alpha_prev");
  require_nonnegative(g_prev_dual_norm, "g_prev_dual_norm");
  require_nonnegative(M, "M");
  require_nonnegative(sigma_T, "sigma_T");
  require_nonnegative(sigma_H, "sigma_H");
  require_nonnegative(update_norm_prev, "update_norm_prev");
  if (update_norm_prev <= 1e-14) return 1.0;
  const double drift = alpha_prev * M * g_prev_dual_norm * (1.0 + std::sqrt(sigma_T)) + 2.0 * sigma_H;
  const double tp1 = static_cast<double>(t) + 1.0;
  const double bound = std::max(1.0 + drift / update_norm_prev, tp1 * tp1);
  return std::clamp(1.0 - 1.0 / bound, 0.0, 1.0);
}

double alpha_inv_sqrt(double alpha0, std::size_t t) {
  if (!(alpha0 > 0.0)) throw ScheduleError(ErrorCode::kNonPositiveInput, "alpha0 must be positive");
  return t == 0 ? alpha0 : alpha0 / std::sqrt(static_cast<double>(t));
}

BrentResult brent_minimize(const std::function<double(double)>& phi, double lo, double hi, double tol,
                           std::size_t max_evals) {
  if (!(lo < hi)) throw ScheduleError(ErrorCode::kInvalidBracket, "brent_minimize needs lo < hi");
  if (!(tol > 0.0)) throw ScheduleError(ErrorCode::kInvalidBracket, "brent_minimize needs tol > 0");
  if (max_evals < 3) throw ScheduleError(ErrorCode::kInvalidBracket, "brent_minimize needs at least 3 evaluations");

  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double rel_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  const std::size_t interior_budget = max_evals - 2;

  double a = lo;
  double b = hi;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = phi(x);
  double fw = fx;
  double fv = fx;
  std::size_t evals = 1;
  double d = 0.0;
  double e = 0.0;

  while (evals < interior_budget) {
    const double m = 0.5 * (a + b);
    const double tol1 = rel_eps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      else q = -q;
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = phi(u);
    ++evals;

    if (fu <= fx) {
      if (u < x) b = x;
      else a = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) a = u;
      else b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  BrentResult best{x, fx, evals};
  const double f_lo = phi(lo);
  const double f_hi = phi(hi);
  best.evaluations += 2;
  if (f_lo < best.fx) {
    best.x = lo;
    best.fx = f_lo;
  }
  if (f_hi < best.fx) {
    best.x = hi;
    best.fx = f_hi;
  }
  return best;
}

std::pair<double, double> beta_interval(BetaInterval rule, std::size_t t) {
  if (rule == BetaInterval::kUnit) return {kIntervalEps, 1.0 - kIntervalEps};
  const double tt = static_cast<double>(std::max<std::size_t>(t, 1));
  const double gap = 1.0 / (tt * tt);
  // Past t = 1000 the tail is narrower than ε; keep half of it open.
  return {std::max(kIntervalEps, 1.0 - gap), 1.0 - std::min(kIntervalEps, 0.5 * gap)};
}

}  // namespace lap
