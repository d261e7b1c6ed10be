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

#include "lap/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lap {

namespace {

void check_dim(const FeasibleSet& q, std::size_t n, const char* where) {
  std::size_t expected = n;
  if (q.kind() == FeasibleSet::Kind::kBox) expected = q.lower().size();
  if (q.kind() == FeasibleSet::Kind::kBall) expected = q.center().size();
  if (expected != n) {
    throw DimensionMismatch(std::string(where) + ": set has dimension " + std::to_string(expected) +
                            ", point has " + std::to_string(n));
  }
}

// Bound-constrained convex QP: min ½(x − y)ᵀP(x − y), lower ≤ x ≤ upper.
Vector project_box_metric(const Vector& lower, const Vector& upper, const SymmetricMatrix& p,
                          std::span<const double> y) {
  const std::size_t n = y.size();
  // 0 free, -1 held at lower, +1 held at upper.
  std::vector<int> state(n, 0);
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] == upper[i]) {
      x[i] = lower[i];
      state[i] = -1;
    } else if (y[i] <= lower[i]) {
      x[i] = lower[i];
      state[i] = -1;
    } else if (y[i] >= upper[i]) {
      x[i] = upper[i];
      state[i] = 1;
    } else {
      x[i] = y[i];
    }
  }

  double p_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) p_scale = std::max(p_scale, std::abs(p(i, i)));

  const std::size_t max_iter = 20 * n + 50;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == 0) free_idx.push_back(i);

    Vector step(n, 0.0);
    if (!free_idx.empty()) {
      // P_FF (x_F − y_F) = −P_FW (x_W − y_W)
      const std::size_t nf = free_idx.size();
      SymmetricMatrix pff(nf);
      Vector rhs(nf, 0.0);
      for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t i = free_idx[a];
        for (std::size_t b = a; b < nf; ++b) pff.set(a, b, p(i, free_idx[b]));
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (state[j] != 0) s -= p(i, j) * (x[j] - y[j]);
        rhs[a] = s;
      }
      const Vector d = SpdOperator(std::move(pff)).solve(rhs);
      for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t i = free_idx[a];
        step[i] = (y[i] + d[a]) - x[i];
      }
    }

    double step_size = 0.0;
    double x_size = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      step_size = std::max(step_size, std::abs(step[i]));
      x_size = std::max(x_size, std::abs(x[i]));
    }

    if (step_size <= 4.0 * std::numeric_limits<double>::epsilon() * x_size) {
      // Stationary on the working set: check multipliers of held bounds.
      Vector grad(n, 0.0);
      double grad_scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += p(i, j) * (x[j] - y[j]);
        grad[i] = s;
        grad_scale = std::max(grad_scale, std::abs(s));
      }
      const double tol = 1e-13 * std::max(grad_scale, p_scale * x_size * 1e-3);
      std::size_t release = n;
      double worst = -tol;
      for (std::size_t i = 0; i < n; ++i) {
        if (state[i] == 0 || lower[i] == upper[i]) continue;
        const double multiplier = state[i] < 0 ? grad[i] : -grad[i];
        if (multiplier < worst) {
          worst = multiplier;
          release = i;
        }
      }
      if (release == n) return x;
      state[release] = 0;
      continue;
    }

    double tau = 1.0;
    std::size_t blocking = n;
    int blocking_side = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] != 0 || step[i] == 0.0) continue;
      if (step[i] < 0.0 && x[i] + step[i] < lower[i]) {
        const double t = (lower[i] - x[i]) / step[i];
        if (t < tau) {
          tau = t;
          blocking = i;
          blocking_side = -1;
        }
      } else if (step[i] > 0.0 && x[i] + step[i] > upper[i]) {
        const double t = (upper[i] - x[i]) / step[i];
        if (t < tau) {
          tau = t;
          blocking = i;
          blocking_side = 1;
        }
      }
    }
    tau = std::max(tau, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == 0) x[i] = std::clamp(x[i] + tau * step[i], lower[i], upper[i]);
    if (blocking != n) {
      x[blocking] = blocking_side < 0 ? lower[blocking] : upper[blocking];
      state[blocking] = blocking_side;
    }
  }
  throw Error(ErrorCode::kInternal, "box projection active-set method did not terminate");
}

Vector project_ball_metric(const Vector& center, double radius, const SpdOperator& p, std::span<const double> y) {
  const std::size_t n = y.size();
  const Vector offset = subtract(y, center);
  if (norm2(offset) <= radius) return Vector(y.begin(), y.end());

  const auto eig = eigen_symmetric(p.matrix());
  Vector w(n, 0.0);  // Vᵀ(y − c)
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) w[k] += eig.vector_entry(i, k) * offset[i];

  auto radius_at = [&](double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double v = eig.values[k] * w[k] / (eig.values[k] + lambda);
      s += v * v;
    }
    return std::sqrt(s);
  };

  // ‖x(λ) − c‖ decreases in λ; at λ = 0 it exceeds the radius.
  double lo = 0.0;
  double hi = eig.values.back() * norm2(w) / radius;
  while (radius_at(hi) > radius) hi *= 2.0;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (radius_at(mid) > radius) lo = mid;
    else hi = mid;
  }
  const double lambda = hi;

  Vector x(center);
  for (std::size_t k = 0; k < n; ++k) {
    const double coef = eig.values[k] * w[k] / (eig.values[k] + lambda);
    for (std::size_t i = 0; i < n; ++i) x[i] += eig.vector_entry(i, k) * coef;
  }
  const Vector d = subtract(x, center);
  const double r = norm2(d);
  if (r > radius) x = add_scaled(center, radius / r, d);
  return x;
}

}  // namespace

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw DimensionMismatch("FeasibleSet::box bounds");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i]))
      throw Error(ErrorCode::kInvalidArgument, "FeasibleSet::box: lower > upper at " + std::to_string(i));
  }
  FeasibleSet q;
  q.kind_ = Kind::kBox;
  q.lower_ = std::move(lower);
  q.upper_ = std::move(upper);
  return q;
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "FeasibleSet::ball: radius must be positive");
  FeasibleSet q;
  q.kind_ = Kind::kBall;
  q.center_ = std::move(center);
  q.radius_ = radius;
  return q;
}

bool FeasibleSet::contains(std::span<const double> x, double tol) const {
  check_dim(*this, x.size(), "FeasibleSet::contains");
  switch (kind_) {
    case Kind::kWholeSpace:
      return true;
    case Kind::kBox:
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
      return true;
    case Kind::kBall:
      return norm2(subtract(x, center_)) <= radius_ + tol;
  }
  return false;
}

const char* to_string(FeasibleSet::Kind kind) {
  switch (kind) {
    case FeasibleSet::Kind::kWholeSpace: return "whole_space";
    case FeasibleSet::Kind::kBox: return "box";
    case FeasibleSet::Kind::kBall: return "ball";
  }
  return "whole_space";
}

Vector project(const FeasibleSet& q, std::span<const double> y) {
  check_dim(q, y.size(), "project");
  Vector out(y.begin(), y.end());
  switch (q.kind()) {
    case FeasibleSet::Kind::kWholeSpace:
      break;
    case FeasibleSet::Kind::kBox:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], q.lower()[i], q.upper()[i]);
      break;
    case FeasibleSet::Kind::kBall: {
      const Vector d = subtract(y, q.center());
      const double r = norm2(d);
      if (r > q.radius()) out = add_scaled(q.center(), q.radius() / r, d);
      break;
    }
  }
  return out;
}

Vector project_metric(const FeasibleSet& q, const SpdOperator& p, std::span<const double> y) {
  check_dim(q, y.size(), "project_metric");
  if (p.dim() != y.size()) throw DimensionMismatch("project_metric: operator dimension");
  switch (q.kind()) {
    case FeasibleSet::Kind::kWholeSpace:
      return Vector(y.begin(), y.end());
    case FeasibleSet::Kind::kBox:
      return project_box_metric(q.lower(), q.upper(), p.matrix(), y);
    case FeasibleSet::Kind::kBall:
      return project_ball_metric(q.center(), q.radius(), p, y);
  }
  return Vector(y.begin(), y.end());
}

const char* to_string(ProjectionMetric metric) {
  return metric == ProjectionMetric::kEuclidean ? "euclidean" : "preconditioner";
}

ProjectionMetric projection_metric_from_string(const std::string& name) {
  if (name == "preconditioner") return ProjectionMetric::kPreconditioner;
  if (name == "euclidean") return ProjectionMetric::kEuclidean;
  throw Error(ErrorCode::kInvalidArgument, "unknown projection metric '" + name + "'");
}

Vector prox_step(const FeasibleSet& q, const SpdOperator& p, std::span<const double> x, double alpha,
                 std::span<const double> g, ProjectionMetric metric) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "prox_step: alpha must be positive");
  const Vector target = add_scaled(x, -alpha, p.solve(g));
  if (q.kind() == FeasibleSet::Kind::kWholeSpace) return target;
  return metric == ProjectionMetric::kEuclidean ? project(q, target) : project_metric(q, p, target);
}

}  // namespace lap
