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

// Dense symmetric / SPD linear algebra at desk scale (n up to a few hundred).
//
// Every operation checks dimensions at its boundary and throws
// DimensionMismatch instead of broadcasting. Matrices are stored row-major in
// full; SymmetricMatrix keeps entries (i, j) and (j, i) bit-identical.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lap/error.hpp"

namespace lap {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
// a + s * b
Vector add_scaled(std::span<const double> a, double s, std::span<const double> b);
bool all_finite(std::span<const double> a);

class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n);

  static SymmetricMatrix identity(std::size_t n, double scale = 1.0);
  static SymmetricMatrix diagonal(std::span<const double> d);
  // Requires exact symmetry of the row-major input.
  static SymmetricMatrix from_row_major(std::span<const double> entries, std::size_t n);
  // (A + Aᵀ) / 2 of an arbitrary square row-major matrix.
  static SymmetricMatrix symmetric_part(std::span<const double> entries, std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value);
  std::span<const double> row_major() const noexcept { return data_; }

  Vector apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  double frobenius_norm() const;

  SymmetricMatrix& operator+=(const SymmetricMatrix& other);
  SymmetricMatrix& operator-=(const SymmetricMatrix& other);
  SymmetricMatrix& operator*=(double s);
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) { return a -= b; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// (1 - w) * a + w * b, computed entrywise so symmetry is exact.
SymmetricMatrix convex_combination(const SymmetricMatrix& a, const SymmetricMatrix& b, double w);

struct EigenDecomposition {
  Vector values;                // ascending
  std::vector<double> vectors;  // row-major n×n, column k is the eigenvector of values[k]

  std::size_t dim() const noexcept { return values.size(); }
  double vector_entry(std::size_t row, std::size_t k) const { return vectors[row * values.size() + k]; }
  // V · diag(values) · Vᵀ
  SymmetricMatrix reassemble(std::span<const double> values) const;
};

// Cyclic Jacobi; stops when the off-diagonal Frobenius norm falls below
// 1e-12 of the matrix Frobenius norm.
EigenDecomposition eigen_symmetric(const SymmetricMatrix& a);

// Symmetric positive-definite operator with its Cholesky factor computed at
// construction. Immutable afterwards.
class SpdOperator {
 public:
  // Throws NotPositiveDefinite on a non-positive pivot.
  explicit SpdOperator(SymmetricMatrix m);
  static SpdOperator identity(std::size_t n, double scale = 1.0);

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const SymmetricMatrix& matrix() const noexcept { return matrix_; }
  // Lower-triangular factor L with L·Lᵀ = matrix(), row-major n×n.
  std::span<const double> factor() const noexcept { return factor_; }

  Vector solve(std::span<const double> g) const;

 private:
  SymmetricMatrix matrix_;
  std::vector<double> factor_;
};

SpdOperator cholesky(const SymmetricMatrix& m);
Vector solve(const SpdOperator& p, std::span<const double> g);

// sqrt(⟨Ax, x⟩). Throws NegativeQuadraticForm (as lap::Error) when the form is
// below -1e-12·‖x‖²; tiny negative rounding is clamped to zero.
double mahalanobis_norm(const SymmetricMatrix& a, std::span<const double> x);
double mahalanobis_norm(const SpdOperator& p, std::span<const double> x);
// sqrt(⟨g, P⁻¹g⟩)
double dual_norm(const SpdOperator& p, std::span<const double> g);

// max |λ(A)|
double operator_norm(const SymmetricMatrix& a);
// sup over the unit P-ball of the P-dual norm of A x, i.e. ‖P^{-1/2} A P^{-1/2}‖₂.
// P^{-1/2} comes from the eigendecomposition of P.
double relative_operator_norm(const SymmetricMatrix& a, const SpdOperator& p);
double min_eigenvalue(const SymmetricMatrix& a);
// Clamp every eigenvalue below mu up to mu. Inputs already ≥ mu are returned
// untouched (detected with a Cholesky of a − mu·I).
SpdOperator eigen_floor(const SymmetricMatrix& a, double mu);

}  // namespace lap
