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

#include "lap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lap {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimension " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

// Cholesky into `factor` (row-major lower). Returns false on a non-positive
// or non-finite pivot.
bool factorize(const SymmetricMatrix& m, std::vector<double>& factor, std::size_t* bad_pivot) {
  const std::size_t n = m.dim();
  factor.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= factor[j * n + k] * factor[j * n + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      if (bad_pivot) *bad_pivot = j;
      return false;
    }
    const double ljj = std::sqrt(diag);
    factor[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= factor[i * n + k] * factor[j * n + k];
      factor[i * n + j] = s / ljj;
    }
  }
  return true;
}

// Solves L y = g in place.
void forward_substitute(std::span<const double> factor, std::size_t n, Vector& y) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= factor[i * n + k] * y[k];
    y[i] = s / factor[i * n + i];
  }
}

// Solves Lᵀ x = y in place.
void backward_substitute(std::span<const double> factor, std::size_t n, Vector& x) {
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= factor[k * n + ii] * x[k];
    x[ii] = s / factor[ii * n + ii];
  }
}

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

void jacobi_sweep(std::vector<double>& a, std::vector<double>& v, std::size_t n) {
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double apq = a[p * n + q];
      if (apq == 0.0) continue;
      const double app = a[p * n + p];
      const double aqq = a[q * n + q];
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const double akp = a[k * n + p];
        const double akq = a[k * n + q];
        const double new_kp = c * akp - s * akq;
        const double new_kq = s * akp + c * akq;
        a[k * n + p] = a[p * n + k] = new_kp;
        a[k * n + q] = a[q * n + k] = new_kq;
      }
      a[p * n + p] = app - t * apq;
      a[q * n + q] = aqq + t * apq;
      a[p * n + q] = a[q * n + p] = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v[k * n + p];
        const double vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
      }
    }
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector add(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "add");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "subtract");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector scaled(std::span<const double> a, double s) {
  Vector out(a.begin(), a.end());
  for (double& x : out) x *= s;
  return out;
}

Vector add_scaled(std::span<const double> a, double s, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "add_scaled");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------
// SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n, double scale) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = scale;
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
  SymmetricMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.data_[i * d.size() + i] = d[i];
  return m;
}

SymmetricMatrix SymmetricMatrix::from_row_major(std::span<const double> entries, std::size_t n) {
  require_same_size(entries.size(), n * n, "SymmetricMatrix::from_row_major");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (entries[i * n + j] != entries[j * n + i])
        throw Error(ErrorCode::kInvalidArgument, "matrix is not exactly symmetric at (" +
                                                     std::to_string(i) + ", " + std::to_string(j) + ")");
  SymmetricMatrix m(n);
  std::copy(entries.begin(), entries.end(), m.data_.begin());
  return m;
}

SymmetricMatrix SymmetricMatrix::symmetric_part(std::span<const double> entries, std::size_t n) {
  require_same_size(entries.size(), n * n, "SymmetricMatrix::symmetric_part");
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.data_[i * n + i] = entries[i * n + i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (entries[i * n + j] + entries[j * n + i]);
      m.data_[i * n + j] = m.data_[j * n + i] = v;
    }
  }
  return m;
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  data_[i * n_ + j] = value;
  data_[j * n_ + i] = value;
}

Vector SymmetricMatrix::apply(std::span<const double> x) const {
  require_same_size(x.size(), n_, "SymmetricMatrix::apply");
  Vector y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += data_[i * n_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

double SymmetricMatrix::quadratic_form(std::span<const double> x) const {
  return dot(apply(x), x);
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& other) {
  require_same_size(n_, other.n_, "SymmetricMatrix::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator-=(const SymmetricMatrix& other) {
  require_same_size(n_, other.n_, "SymmetricMatrix::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

SymmetricMatrix convex_combination(const SymmetricMatrix& a, const SymmetricMatrix& b, double w) {
  require_same_size(a.dim(), b.dim(), "convex_combination");
  const std::size_t n = a.dim();
  SymmetricMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.set(i, j, (1.0 - w) * a(i, j) + w * b(i, j));
  return out;
}

// ---------------------------------------------------------------------------
// Eigendecomposition

SymmetricMatrix EigenDecomposition::reassemble(std::span<const double> lambda) const {
  const std::size_t n = dim();
  require_same_size(lambda.size(), n, "EigenDecomposition::reassemble");
  SymmetricMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += vector_entry(i, k) * lambda[k] * vector_entry(j, k);
      out.set(i, j, s);
    }
  }
  return out;
}

EigenDecomposition eigen_symmetric(const SymmetricMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> a(m.row_major().begin(), m.row_major().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = m.frobenius_norm();
  if (scale > 0.0) {
    constexpr int kMaxSweeps = 60;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      if (off_diagonal_norm(a, n) <= 1e-12 * scale) {
        // One polishing sweep; convergence is quadratic from here.
        jacobi_sweep(a, v, n);
        converged = true;
        break;
      }
      jacobi_sweep(a, v, n);
    }
    if (!converged && off_diagonal_norm(a, n) > 1e-12 * scale)
      throw Error(ErrorCode::kInternal, "Jacobi eigensolver did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// SpdOperator

SpdOperator::SpdOperator(SymmetricMatrix m) : matrix_(std::move(m)) {
  std::size_t bad = 0;
  if (!factorize(matrix_, factor_, &bad)) {
    throw NotPositiveDefinite("Cholesky pivot " + std::to_string(bad) + " is not positive");
  }
}

SpdOperator SpdOperator::identity(std::size_t n, double scale) {
  return SpdOperator(SymmetricMatrix::identity(n, scale));
}

Vector SpdOperator::solve(std::span<const double> g) const {
  require_same_size(g.size(), dim(), "solve");
  Vector y(g.begin(), g.end());
  forward_substitute(factor_, dim(), y);
  backward_substitute(factor_, dim(), y);
  return y;
}

SpdOperator cholesky(const SymmetricMatrix& m) { return SpdOperator(m); }

Vector solve(const SpdOperator& p, std::span<const double> g) { return p.solve(g); }

double mahalanobis_norm(const SymmetricMatrix& a, std::span<const double> x) {
  require_same_size(x.size(), a.dim(), "mahalanobis_norm");
  const double q = a.quadratic_form(x);
  if (q < -1e-12 * dot(x, x)) {
    throw Error(ErrorCode::kNegativeQuadraticForm,
                "quadratic form " + std::to_string(q) + " is negative");
  }
  return std::sqrt(std::max(q, 0.0));
}

double mahalanobis_norm(const SpdOperator& p, std::span<const double> x) {
  require_same_size(x.size(), p.dim(), "mahalanobis_norm");
  // ‖Lᵀx‖
  const std::size_t n = p.dim();
  const auto l = p.factor();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double y = 0.0;
    for (std::size_t i = j; i < n; ++i) y += l[i * n + j] * x[i];
    s += y * y;
  }
  return std::sqrt(s);
}

double dual_norm(const SpdOperator& p, std::span<const double> g) {
  require_same_size(g.size(), p.dim(), "dual_norm");
  Vector y(g.begin(), g.end());
  forward_substitute(p.factor(), p.dim(), y);
  return norm2(y);
}

double operator_norm(const SymmetricMatrix& a) {
  if (a.dim() == 0) return 0.0;
  const auto eig = eigen_symmetric(a);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double relative_operator_norm(const SymmetricMatrix& a, const SpdOperator& p) {
  require_same_size(a.dim(), p.dim(), "relative_operator_norm");
  const std::size_t n = a.dim();
  const auto eig = eigen_symmetric(p.matrix());
  Vector inv_sqrt(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(eig.values[k] > 0.0)) throw NotPositiveDefinite("relative_operator_norm: P has a non-positive eigenvalue");
    inv_sqrt[k] = 1.0 / std::sqrt(eig.values[k]);
  }
  const SymmetricMatrix w = eig.reassemble(inv_sqrt);
  // W A W, symmetrized by computing the upper triangle only.
  std::vector<double> aw(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * w(k, j);
      aw[i * n + j] = s;
    }
  SymmetricMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += w(i, k) * aw[k * n + j];
      c.set(i, j, s);
    }
  return operator_norm(c);
}

double min_eigenvalue(const SymmetricMatrix& a) {
  if (a.dim() == 0) throw Error(ErrorCode::kInvalidArgument, "min_eigenvalue of an empty matrix");
  return eigen_symmetric(a).values.front();
}

SpdOperator eigen_floor(const SymmetricMatrix& a, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eigen_floor: mu must be positive");
  std::vector<double> scratch;
  if (factorize(a - SymmetricMatrix::identity(a.dim(), mu), scratch, nullptr)) {
    return SpdOperator(a);
  }
  const auto eig = eigen_symmetric(a);
  Vector clamped = eig.values;
  for (double& l : clamped) l = std::max(l, mu);
  return SpdOperator(eig.reassemble(clamped));
}

}  // namespace lap
