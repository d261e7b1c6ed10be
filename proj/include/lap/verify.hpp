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

// Randomized property checks for the cubic and projection lemmas, the objective
// implementations and the oracle contracts. Each check reduces to a
// PropertyReport; negative controls deliberately break a hypothesis and are
// expected to fail.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lap/feasible_set.hpp"
#include "lap/linalg.hpp"
#include "lap/oracles.hpp"
#include "lap/rng.hpp"

namespace lap {

struct PropertyReport {
  std::string name;
  std::size_t trials = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = false;       // max_violation <= tolerance
  bool expect_pass = true;   // false for negative controls

  bool as_expected() const noexcept { return passed == expect_pass; }
};

PropertyReport make_report(std::string name, std::size_t trials, double max_violation, double tolerance,
                           bool expect_pass = true);
std::string format_report(const PropertyReport& report);

// QᵀDQ, Q Haar-ish orthogonal, D log-uniform in [lo, hi].
SymmetricMatrix random_spd(std::size_t n, Rng& rng, double lo = 1e-3, double hi = 1e3);

// ‖P⁻¹g‖³_T ≤ (3/2)(‖g‖*_P)³(1 + ‖T − P‖^{3/2}_{op,P}), violation relative to
// the right side. Without the correction the bound reads (3/2)(‖g‖*_P)³.
PropertyReport check_cubic_bound(std::size_t trials, Rng& rng, bool with_correction = true);

// Non-expansiveness of the Euclidean projection, and direction and length of
// the projected preconditioned step. metric selects which projection the
// direction and length checks use.
std::vector<PropertyReport> check_projection_lemmas(std::size_t trials, Rng& rng,
                                                    ProjectionMetric metric = ProjectionMetric::kPreconditioner);

// −⟨a, P⁻¹b⟩ = −½(‖a‖*)² − ½(‖b‖*)² + ½(‖a − b‖*)², relative to the scale of
// the terms. squared = false evaluates the printed unsquared form.
PropertyReport check_brackets(std::size_t trials, Rng& rng, bool squared = true);

// Central differences of f (against ∇f) and of ∇f (against ∇²f) at random
// points in [−1, 1]ⁿ. Returns {gradient, hessian} reports.
std::vector<PropertyReport> check_finite_differences(const Objective& obj, std::size_t points, Rng& rng,
                                                     const std::string& label, double grad_tol = 1e-6,
                                                     double hess_tol = 1e-5);

// f(y) ≤ f(x) + ⟨∇f(x), y − x⟩ + ½‖y − x‖²_{∇²f(x)} + (M/6)‖y − x‖³_{T(x)}
// with M = m_scale · obj.hessian_lipschitz().
PropertyReport check_hessian_lipschitz(const Objective& obj, std::size_t trials, Rng& rng, const std::string& label,
                                       double m_scale = 1.0);

// Zero-noise runs under tightened thm1 steps; max normalized violation
// of the descent lemma over all steps and seeds.
PropertyReport check_descent_lemma(const std::string& objective, std::size_t steps, std::size_t seeds,
                                   std::uint64_t seed0 = 0);

// Gradient bias within 4σ_g/√N, ‖E‖_op ≤ σ_H per draw, λ_min(H) ≥ floor_mu.
std::vector<PropertyReport> check_oracle_contracts(std::size_t gradient_samples, std::size_t hessian_draws,
                                                   Rng& rng);

struct VerifyOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
};

// Runs the suite; on_report is called as each report completes.
std::vector<PropertyReport> run_verify_suite(const VerifyOptions& options,
                                             const std::function<void(const PropertyReport&)>& on_report = {});

}  // namespace lap
