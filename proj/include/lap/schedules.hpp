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

// Step sizes α_t, averaging rates β_t and floors μ_t.
//
// Two families of rules live here. The theorem rules are closed-form bounds
// that make the per-step descent inequality hold (non-convex case) or give the
// O(1/√T) rate (convex case); they depend on the realized ‖g_t‖*_{P_t} and are
// therefore evaluated inside the iteration. The heuristic rules are the
// inverse-square-root step and a Brent line search for β over an interval.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace lap {

struct ScheduleConstants {
  double c1 = 0.5;  // in (0, 1)
  double c2 = 0.1;
  double c3 = 0.1;
};

struct StepRule {
  enum class Kind { kThm1, kThm1Tight, kThm2, kInvSqrt, kConstant };
  Kind kind = Kind::kThm1Tight;
  double alpha0 = 1.0;  // inv_sqrt and constant only
};

enum class BetaInterval { kUnit, kTail };

struct BetaRule {
  enum class Kind { kFixed, kThm2Bound, kBrentSearch };
  Kind kind = Kind::kFixed;
  double beta = 1.0;                       // fixed only
  BetaInterval interval = BetaInterval::kUnit;  // brent only
  double brent_tol = 1e-6;
  std::size_t brent_max_evals = 20;
};

// Δ_t = Δ_0 / (1 + t)^exponent, exponent > 0.
struct DeltaDecay {
  double exponent = 1.0;
};

struct ScheduleSpec {
  StepRule step_rule;
  BetaRule beta_rule;
  double sigma_T = 0.0;
  ScheduleConstants constants;
  std::optional<double> delta0;  // unset: σ_H / μ_0 when σ_H > 0, else 1
  double mu0 = 1e-8;
  DeltaDecay delta_decay;

  bool theorem_step_rule() const noexcept;
  // Throws ConfigError naming the offending field (relative to `path`).
  void validate(const std::string& path = "schedule") const;
  double resolved_delta0(double sigma_h) const;
  double delta_at(std::size_t t, double sigma_h) const;
};

const char* to_string(StepRule::Kind kind);
const char* to_string(BetaRule::Kind kind);
const char* to_string(BetaInterval interval);

// 1/(1 + (1+√(Mg))Δ + √(Mg)(σ_T+2)) when loose,
// 1/(1 + (1+¾√(Mg))Δ + √(Mg)(¾σ_T+5/4)) when tight. g = ‖g_t‖*_{P_t}.
// Throws ScheduleError(kNonPositiveDelta) for Δ ≤ 0.
double alpha_thm1(double g_dual_norm, double delta_t, double sigma_T, double M, bool tight);

// μ_t = 1/(1/μ_{t−1} + M α g (1+√σ_T)/Δ_{t−1} + 1e-13/μ_{t−1}); the slack makes
// the defining inequality strict.
double mu_thm1_next(double mu_prev, double delta_prev, double alpha_prev, double g_prev_dual_norm, double M,
                    double sigma_T);

// 1/((1+Δ)/c1 + g^{3/4}(1 + (Δ+σ_T)^{3/4}))
double alpha_thm2_curvature(double g_dual_norm, double delta_t, double sigma_T, double c1);
// √((2c3σ_H + c3M(1+√σ_T) + c2 + 1) / (T(σ_g²/(μ(1−c1)) + M/2))).
// Throws ScheduleError(kNonPositiveDenominator) when σ_g = M = 0.
double alpha_thm2_horizon(double sigma_T, double M, double sigma_g, double sigma_H, double mu, std::size_t T_total,
                          const ScheduleConstants& constants);
double alpha_thm2(double g_dual_norm, double delta_t, double sigma_T, double M, double sigma_g, double sigma_H,
                  double mu, std::size_t T_total, const ScheduleConstants& constants);

// β_t = 1 − 1/max{1 + (αMg(1+√σ_T) + 2σ_H)/‖H_{t−1} − P_{t−1}‖_op, (t+1)²};
// 1 when the norm vanishes (≤ 1e-14).
double beta_thm2_lower(double alpha_prev, double g_prev_dual_norm, double M, double sigma_T, double sigma_H,
                       double update_norm_prev, std::size_t t);

// α_0 at t = 0, α_0/√t afterwards.
double alpha_inv_sqrt(double alpha0, std::size_t t);

struct BrentResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t evaluations = 0;
};

// Brent's parabolic interpolation with golden-section safeguard on [lo, hi];
// tol is an absolute tolerance on x. Two of the max_evals evaluations are
// reserved for the endpoints, which win when φ is monotone on the interval.
// Throws ScheduleError(kInvalidBracket) unless lo < hi, tol > 0, max_evals ≥ 3.
BrentResult brent_minimize(const std::function<double(double)>& phi, double lo, double hi, double tol,
                           std::size_t max_evals);

// unit: (ε, 1−ε); tail: (max(ε, 1 − 1/τ²), 1 − min(ε, 1/(2τ²))) with τ = max(t, 1)
// and ε = 1e-6, so lo < hi for every t.
std::pair<double, double> beta_interval(BetaInterval rule, std::size_t t);

}  // namespace lap
