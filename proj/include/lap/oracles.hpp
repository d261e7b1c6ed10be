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

// Objectives with exact derivatives, the random quadratic test problem, and
// stochastic gradient / Hessian samplers built on top of them.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lap/linalg.hpp"
#include "lap/rng.hpp"

namespace lap {

class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual Vector gradient(std::span<const double> x) const = 0;
  virtual SymmetricMatrix hessian(std::span<const double> x) const = 0;

  // Constant M of the cubic upper model, measured in the metric(x) norm.
  virtual double hessian_lipschitz() const { return 0.0; }
  virtual SpdOperator metric(std::span<const double> /*x*/) const { return SpdOperator::identity(dim()); }

  virtual std::optional<Vector> minimizer() const { return std::nullopt; }
  virtual std::optional<double> optimal_value() const { return std::nullopt; }
};

// f(x) = ⟨A x, x⟩ − ⟨b, x⟩ with A sampled entrywise: off-diagonal uniform on
// (0, 0.001), diagonal uniform on (0, 0.006), b uniform on (0, 1).
//
// The sampled A need not be positive definite. When the symmetric part has
// λ_min ≤ 0 the problem is shifted by (|λ_min| + 1e-6)·I; `shift` records the
// amount and the shift is part of the objective (value adds shift·‖x‖²).
struct QuadraticProblem {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> a_raw;  // row-major n×n as sampled
  SymmetricMatrix a_sym;      // (A + Aᵀ)/2 + shift·I
  double shift = 0.0;
  Vector b;
  Vector x_star;
  double f_star = 0.0;

  double value(std::span<const double> x) const;
  // 2·a_sym·x − b
  Vector gradient(std::span<const double> x) const;
  // 2·a_sym
  SymmetricMatrix hessian() const;
};

QuadraticProblem make_quadratic(std::size_t n, std::uint64_t seed);
// Builds the derived fields (a_sym, shift, x_star, f_star) from raw data.
QuadraticProblem quadratic_from_data(std::size_t n, std::vector<double> a_raw, Vector b, std::uint64_t seed);

std::string quadratic_to_json(const QuadraticProblem& problem);
QuadraticProblem quadratic_from_json(const std::string& text);
void save_quadratic(const QuadraticProblem& problem, const std::string& path);
QuadraticProblem load_quadratic(const std::string& path);

class QuadraticObjective final : public Objective {
 public:
  explicit QuadraticObjective(QuadraticProblem problem) : problem_(std::move(problem)) {}

  const QuadraticProblem& problem() const noexcept { return problem_; }

  std::size_t dim() const override { return problem_.n; }
  double value(std::span<const double> x) const override { return problem_.value(x); }
  Vector gradient(std::span<const double> x) const override { return problem_.gradient(x); }
  SymmetricMatrix hessian(std::span<const double> /*x*/) const override { return problem_.hessian(); }
  std::optional<Vector> minimizer() const override { return problem_.x_star; }
  std::optional<double> optimal_value() const override { return problem_.f_star; }

 private:
  QuadraticProblem problem_;
};

// f(x) = log Σ_i exp(⟨a_i, x⟩ + c_i) + (reg/2)‖x‖², with T(x) = I.
//
// The third directional derivative of log-sum-exp along h is bounded by
// 2‖A h‖_∞³ ≤ 2‖A‖₂³‖h‖³, so M = 2‖A‖₂³ is a valid (conservative) constant.
class LogSumExpObjective final : public Objective {
 public:
  LogSumExpObjective(std::size_t n, std::vector<double> rows, Vector offsets, double reg);
  // m = 2n random rows with N(0, 1/n) entries, offsets N(0, 1).
  static LogSumExpObjective random(std::size_t n, double reg, std::uint64_t seed);

  std::size_t dim() const override { return n_; }
  double value(std::span<const double> x) const override;
  Vector gradient(std::span<const double> x) const override;
  SymmetricMatrix hessian(std::span<const double> x) const override;
  double hessian_lipschitz() const override { return lipschitz_; }
  double regularization() const noexcept { return reg_; }

 private:
  Vector softmax(std::span<const double> x) const;
  Vector logits(std::span<const double> x) const;

  std::size_t n_;
  std::size_t m_;
  std::vector<double> rows_;  // row-major m×n
  Vector offsets_;
  double reg_;
  double lipschitz_;
};

struct GradientNoiseModel {
  enum class Kind { kNone, kGaussianUnbiased, kUniformBiased };
  Kind kind = Kind::kNone;
  double sigma_g = 0.0;
};

struct HessianNoiseModel {
  double sigma_h = 0.0;
  double floor_mu = 1e-8;
};

const char* to_string(GradientNoiseModel::Kind kind);
GradientNoiseModel::Kind gradient_noise_kind_from_string(const std::string& name);

// Additive noise draw: gaussian_unbiased uses N(0, σ_g²/n) per coordinate so
// that E‖ξ‖² = σ_g²; uniform_biased uses U(0, σ_g) per coordinate.
Vector gradient_noise(std::size_t n, const GradientNoiseModel& noise, Rng& rng);
Vector sample_gradient(const Objective& obj, std::span<const double> x, const GradientNoiseModel& noise, Rng& rng);

// Symmetric Gaussian matrix rescaled to operator norm u·σ_H, u ~ U(0, 1].
// Returns the zero matrix without consuming randomness when σ_H = 0.
SymmetricMatrix hessian_perturbation(std::size_t n, double sigma_h, Rng& rng);

struct HessianSample {
  SymmetricMatrix perturbation;  // raw E
  SpdOperator approximation;     // eigen_floor(∇²f + E, floor_mu)
};
HessianSample sample_hessian_detailed(const Objective& obj, std::span<const double> x, const HessianNoiseModel& noise,
                                      Rng& rng);
SpdOperator sample_hessian(const Objective& obj, std::span<const double> x, const HessianNoiseModel& noise, Rng& rng);

struct OracleStatistics {
  Vector bias_g;        // mean of g − ∇f
  double var_g = 0.0;   // mean of ‖g − ∇f‖²
  double var_h = 0.0;   // mean of ‖E‖_op² (before flooring)
};
OracleStatistics oracle_statistics(const Objective& obj, std::span<const double> x, const GradientNoiseModel& noise_g,
                                   const HessianNoiseModel& noise_h, std::size_t n_samples, Rng& rng);

}  // namespace lap
