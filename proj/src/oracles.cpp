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

#include "lap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lap {

// ---------------------------------------------------------------------------
// Quadratic problem

double QuadraticProblem::value(std::span<const double> x) const {
  if (x.size() != n) throw DimensionMismatch("QuadraticProblem::value");
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a_raw[i * n + j] * x[j];
    quad += row * x[i];
  }
  return quad + shift * dot(x, x) - dot(b, x);
}

Vector QuadraticProblem::gradient(std::span<const double> x) const {
  Vector g = a_sym.apply(x);
  for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * g[i] - b[i];
  return g;
}

SymmetricMatrix QuadraticProblem::hessian() const { return 2.0 * a_sym; }

QuadraticProblem quadratic_from_data(std::size_t n, std::vector<double> a_raw, Vector b, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "quadratic problem needs n >= 1");
  if (a_raw.size() != n * n || b.size() != n) throw DimensionMismatch("quadratic_from_data");
  QuadraticProblem p;
  p.n = n;
  p.seed = seed;
  p.a_raw = std::move(a_raw);
  p.b = std::move(b);
  p.a_sym = SymmetricMatrix::symmetric_part(p.a_raw, n);
  const double lmin = min_eigenvalue(p.a_sym);
  if (lmin <= 0.0) {
    p.shift = std::abs(lmin) + 1e-6;
    p.a_sym += SymmetricMatrix::identity(n, p.shift);
  }
  p.x_star = cholesky(p.hessian()).solve(p.b);
  p.f_star = p.value(p.x_star);
  return p;
}

QuadraticProblem make_quadratic(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "make_quadratic: n must be at least 1");
  Rng rng(mix_seed(seed));
  // uniform_real_distribution samples [a, b); redraw the measure-zero left end
  // so every entry lies in the open interval.
  auto open_uniform = [&rng](double hi) {
    std::uniform_real_distribution<double> u(0.0, hi);
    double v = 0.0;
    while (v == 0.0) v = u(rng);
    return v;
  };
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = (i == j) ? open_uniform(0.006) : open_uniform(0.001);
  Vector b(n);
  for (double& v : b) v = open_uniform(1.0);
  return quadratic_from_data(n, std::move(a), std::move(b), seed);
}

std::string quadratic_to_json(const QuadraticProblem& problem) {
  nlohmann::json j;
  j["format"] = "lap-quadratic-v1";
  j["n"] = problem.n;
  j["seed"] = problem.seed;
  j["shift"] = problem.shift;
  j["a_raw"] = problem.a_raw;
  j["b"] = problem.b;
  j["x_star"] = problem.x_star;
  j["f_star"] = problem.f_star;
  return j.dump(2);
}

QuadraticProblem quadratic_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("problem", std::string("malformed problem file: ") + e.what());
  }
  try {
    const auto n = j.at("n").get<std::size_t>();
    auto a_raw = j.at("a_raw").get<std::vector<double>>();
    auto b = j.at("b").get<Vector>();
    const auto seed = j.value("seed", std::uint64_t{0});
    if (a_raw.size() != n * n) throw ConfigError("problem.a_raw", "expected n*n entries");
    if (b.size() != n) throw ConfigError("problem.b", "expected n entries");
    return quadratic_from_data(n, std::move(a_raw), std::move(b), seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("problem", e.what());
  }
}

void save_quadratic(const QuadraticProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  out << quadratic_to_json(problem) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

QuadraticProblem load_quadratic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return quadratic_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Log-sum-exp

LogSumExpObjective::LogSumExpObjective(std::size_t n, std::vector<double> rows, Vector offsets, double reg)
    : n_(n), m_(offsets.size()), rows_(std::move(rows)), offsets_(std::move(offsets)), reg_(reg) {
  if (rows_.size() != m_ * n_) throw DimensionMismatch("LogSumExpObjective rows");
  if (reg_ < 0.0) throw Error(ErrorCode::kInvalidArgument, "LogSumExpObjective: negative regularization");
  SymmetricMatrix ata(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m_; ++r) s += rows_[r * n_ + i] * rows_[r * n_ + j];
      ata.set(i, j, s);
    }
  const double a_norm = std::sqrt(operator_norm(ata));
  lipschitz_ = 2.0 * a_norm * a_norm * a_norm;
}

LogSumExpObjective LogSumExpObjective::random(std::size_t n, double reg, std::uint64_t seed) {
  Rng rng(mix_seed(seed ^ 0x6c73655f6f626aULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t m = 2 * n;
  std::vector<double> rows(m * n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : rows) v = normal(rng) * scale;
  Vector offsets(m);
  for (double& v : offsets) v = normal(rng);
  return LogSumExpObjective(n, std::move(rows), std::move(offsets), reg);
}

Vector LogSumExpObjective::logits(std::span<const double> x) const {
  if (x.size() != n_) throw DimensionMismatch("LogSumExpObjective");
  Vector z(m_);
  for (std::size_t r = 0; r < m_; ++r) {
    double s = offsets_[r];
    for (std::size_t j = 0; j < n_; ++j) s += rows_[r * n_ + j] * x[j];
    z[r] = s;
  }
  return z;
}

Vector LogSumExpObjective::softmax(std::span<const double> x) const {
  Vector z = logits(x);
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

double LogSumExpObjective::value(std::span<const double> x) const {
  const Vector z = logits(x);
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double v : z) total += std::exp(v - zmax);
  return zmax + std::log(total) + 0.5 * reg_ * dot(x, x);
}

Vector LogSumExpObjective::gradient(std::span<const double> x) const {
  const Vector p = softmax(x);
  Vector g(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    double s = reg_ * x[j];
    for (std::size_t r = 0; r < m_; ++r) s += rows_[r * n_ + j] * p[r];
    g[j] = s;
  }
  return g;
}

SymmetricMatrix LogSumExpObjective::hessian(std::span<const double> x) const {
  const Vector p = softmax(x);
  // Aᵀ p
  Vector ap(n_, 0.0);
  for (std::size_t r = 0; r < m_; ++r)
    for (std::size_t j = 0; j < n_; ++j) ap[j] += rows_[r * n_ + j] * p[r];
  SymmetricMatrix h(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m_; ++r) s += p[r] * rows_[r * n_ + i] * rows_[r * n_ + j];
      s -= ap[i] * ap[j];
      if (i == j) s += reg_;
      h.set(i, j, s);
    }
  return h;
}

// ---------------------------------------------------------------------------
// Samplers

const char* to_string(GradientNoiseModel::Kind kind) {
  switch (kind) {
    case GradientNoiseModel::Kind::kNone: return "none";
    case GradientNoiseModel::Kind::kGaussianUnbiased: return "gaussian_unbiased";
    case GradientNoiseModel::Kind::kUniformBiased: return "uniform_biased";
  }
  return "none";
}

GradientNoiseModel::Kind gradient_noise_kind_from_string(const std::string& name) {
  if (name == "none") return GradientNoiseModel::Kind::kNone;
  if (name == "gaussian_unbiased") return GradientNoiseModel::Kind::kGaussianUnbiased;
  if (name == "uniform_biased") return GradientNoiseModel::Kind::kUniformBiased;
  throw Error(ErrorCode::kInvalidArgument, "unknown gradient noise kind '" + name + "'");
}

Vector gradient_noise(std::size_t n, const GradientNoiseModel& noise, Rng& rng) {
  Vector xi(n, 0.0);
  switch (noise.kind) {
    case GradientNoiseModel::Kind::kNone:
      break;
    case GradientNoiseModel::Kind::kGaussianUnbiased: {
      std::normal_distribution<double> normal(0.0, noise.sigma_g / std::sqrt(static_cast<double>(n)));
      for (double& v : xi) v = normal(rng);
      break;
    }
    case GradientNoiseModel::Kind::kUniformBiased: {
      std::uniform_real_distribution<double> uniform(0.0, noise.sigma_g);
      for (double& v : xi) v = uniform(rng);
      break;
    }
  }
  return xi;
}

Vector sample_gradient(const Objective& obj, std::span<const double> x, const GradientNoiseModel& noise, Rng& rng) {
  Vector g = obj.gradient(x);
  if (noise.kind == GradientNoiseModel::Kind::kNone) return g;
  const Vector xi = gradient_noise(g.size(), noise, rng);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += xi[i];
  return g;
}

SymmetricMatrix hessian_perturbation(std::size_t n, double sigma_h, Rng& rng) {
  SymmetricMatrix e(n);
  if (sigma_h == 0.0) return e;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) e.set(i, j, normal(rng));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = 1.0 - uniform(rng);  // (0, 1]
  const double norm = operator_norm(e);
  if (norm == 0.0) return e;
  e *= u * sigma_h / norm;
  return e;
}

HessianSample sample_hessian_detailed(const Objective& obj, std::span<const double> x, const HessianNoiseModel& noise,
                                      Rng& rng) {
  SymmetricMatrix e = hessian_perturbation(obj.dim(), noise.sigma_h, rng);
  SymmetricMatrix h = obj.hessian(x);
  if (noise.sigma_h != 0.0) h += e;
  return HessianSample{std::move(e), eigen_floor(h, noise.floor_mu)};
}

SpdOperator sample_hessian(const Objective& obj, std::span<const double> x, const HessianNoiseModel& noise, Rng& rng) {
  return sample_hessian_detailed(obj, x, noise, rng).approximation;
}

OracleStatistics oracle_statistics(const Objective& obj, std::span<const double> x, const GradientNoiseModel& noise_g,
                                   const HessianNoiseModel& noise_h, std::size_t n_samples, Rng& rng) {
  if (n_samples < 100) throw Error(ErrorCode::kInvalidArgument, "oracle_statistics needs at least 100 samples");
  const std::size_t n = obj.dim();
  const Vector exact = obj.gradient(x);
  OracleStatistics stats;
  stats.bias_g.assign(n, 0.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Vector g = sample_gradient(obj, x, noise_g, rng);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = g[i] - exact[i];
      stats.bias_g[i] += d;
      sq += d * d;
    }
    stats.var_g += sq;
    const double e = operator_norm(hessian_perturbation(n, noise_h.sigma_h, rng));
    stats.var_h += e * e;
  }
  const double inv = 1.0 / static_cast<double>(n_samples);
  for (double& v : stats.bias_g) v *= inv;
  stats.var_g *= inv;
  stats.var_h *= inv;
  return stats;
}

}  // namespace lap
