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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "lap/linalg.hpp"
#include "lap/verify.hpp"
#include "support.hpp"

using namespace lap;
using lap::test::to_eigen;

TEST_CASE("cholesky reconstructs and rejects indefinite input") {
  const SpdOperator id = cholesky(SymmetricMatrix::identity(2));
  CHECK(id.factor()[0] == 1.0);
  CHECK(id.factor()[1] == 0.0);
  CHECK(id.factor()[3] == 1.0);

  const double m[] = {4, 2, 2, 3};
  const SpdOperator p = cholesky(SymmetricMatrix::from_row_major(m, 2));
  const auto f = p.factor();
  Eigen::Matrix2d l;
  l << f[0], f[1], f[2], f[3];
  Eigen::Matrix2d want;
  want << 4, 2, 2, 3;
  CHECK((l * l.transpose() - want).norm() <= 1e-12 * want.norm());

  const double bad[] = {1, 2, 2, 1};
  CHECK_THROWS_AS(cholesky(SymmetricMatrix::from_row_major(bad, 2)), NotPositiveDefinite);
}

TEST_CASE("solve examples and residual") {
  const Vector g = {3, 4};
  CHECK(solve(SpdOperator::identity(2), g) == g);
  const double d[] = {2, 4};
  const Vector x = solve(cholesky(SymmetricMatrix::diagonal(d)), Vector{2, 4});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng = make_rng(11, 0);
  for (int k = 0; k < 20; ++k) {
    const SymmetricMatrix a = test::random_symmetric(5, rng);
    SymmetricMatrix spd = SymmetricMatrix::identity(5, 0.1);
    const Eigen::MatrixXd e = to_eigen(a);
    const Eigen::MatrixXd ata = e.transpose() * e;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i; j < 5; ++j)
        spd.set(i, j, spd(i, j) + ata(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    const Vector rhs = test::random_vector(5, rng);
    const Vector sol = solve(cholesky(spd), rhs);
    CHECK(norm2(subtract(spd.apply(sol), rhs)) <= 1e-10 * norm2(rhs));
  }
}

TEST_CASE("solve is backward stable up to condition number 1e8") {
  // A residual of 1e-10·‖g‖ at κ = 1e8 is below what the correctly rounded
  // solution achieves in double precision (≈ eps·κ·‖g‖), so the absolute
  // bound is checked up to κ = 1e6 and the normwise backward error beyond.
  Rng rng = make_rng(12, 0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (double kappa : {1e2, 1e4, 1e6, 1e8}) {
    for (int k = 0; k < 50; ++k) {
      const SymmetricMatrix a = random_spd(6, rng, 1.0 / kappa, 1.0);
      const SpdOperator p = cholesky(a);
      const Vector g = test::random_vector(6, rng);
      const Vector x = p.solve(g);
      const double res = norm2(subtract(a.apply(x), g));
      CHECK(res <= 64 * eps * (operator_norm(a) * norm2(x) + norm2(g)));
      if (kappa <= 1e6) CHECK(res <= 1e-10 * norm2(g));
    }
  }
}

TEST_CASE("mahalanobis and dual norms") {
  const Vector x = {3, 4};
  CHECK(mahalanobis_norm(SymmetricMatrix::identity(2), x) == doctest::Approx(5.0));
  const double d41[] = {4, 1};
  CHECK(mahalanobis_norm(SymmetricMatrix::diagonal(d41), Vector{1, 2}) == doctest::Approx(std::sqrt(8.0)));
  CHECK(mahalanobis_norm(SymmetricMatrix::identity(2, 2.0), x) == doctest::Approx(5.0 * std::sqrt(2.0)));

  CHECK(dual_norm(SpdOperator::identity(2), x) == doctest::Approx(5.0));
  CHECK(dual_norm(SpdOperator::identity(2, 2.0), x) == doctest::Approx(5.0 / std::sqrt(2.0)));
  CHECK(dual_norm(cholesky(SymmetricMatrix::diagonal(d41)), Vector{2, 3}) == doctest::Approx(std::sqrt(10.0)));

  const double indefinite[] = {1, -1};
  CHECK_THROWS_AS(mahalanobis_norm(SymmetricMatrix::diagonal(indefinite), Vector{0, 1}), Error);
}

TEST_CASE("dual norm squared equals inner product with the solve") {
  Rng rng = make_rng(13, 0);
  for (int k = 0; k < 50; ++k) {
    const Eigen::MatrixXd e = to_eigen(test::random_symmetric(4, rng));
    const Eigen::MatrixXd m = e * e.transpose() + 0.01 * Eigen::MatrixXd::Identity(4, 4);
    SymmetricMatrix a(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) a.set(i, j, m(Eigen::Index(i), Eigen::Index(j)));
    const SpdOperator p = cholesky(a);
    const Vector g = test::random_vector(4, rng);
    const double lhs = std::pow(dual_norm(p, g), 2);
    const double rhs = dot(g, p.solve(g));
    CHECK(test::rel_err(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("operator norm and min eigenvalue") {
  CHECK(operator_norm(SymmetricMatrix::identity(3)) == doctest::Approx(1.0));
  const double d[] = {1, -5};
  CHECK(operator_norm(SymmetricMatrix::diagonal(d)) == doctest::Approx(5.0));
  CHECK(min_eigenvalue(SymmetricMatrix::identity(4)) == doctest::Approx(1.0));
  const double d2[] = {0.008, 3};
  CHECK(min_eigenvalue(SymmetricMatrix::diagonal(d2)) == doctest::Approx(0.008));

  Rng rng = make_rng(14, 0);
  for (int k = 0; k < 20; ++k) {
    const SymmetricMatrix a = test::random_symmetric(6, rng);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
    const double want = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(test::rel_err(operator_norm(a), want) <= 1e-8);
    CHECK(std::abs(min_eigenvalue(a) - es.eigenvalues()(0)) <= 1e-10 * want);
  }
}

TEST_CASE("eigen_symmetric gives Rayleigh-consistent pairs") {
  Rng rng = make_rng(15, 0);
  for (int k = 0; k < 20; ++k) {
    const SymmetricMatrix a = test::random_symmetric(7, rng);
    const EigenDecomposition ed = eigen_symmetric(a);
    for (std::size_t c = 0; c < ed.dim(); ++c) {
      Vector v(ed.dim());
      for (std::size_t r = 0; r < ed.dim(); ++r) v[r] = ed.vector_entry(r, c);
      CHECK(std::abs(a.quadratic_form(v) / dot(v, v) - ed.values[c]) <= 1e-10 * operator_norm(a));
      if (c > 0) CHECK(ed.values[c - 1] <= ed.values[c]);
    }
    CHECK(test::max_abs_diff(to_eigen(ed.reassemble(ed.values)), to_eigen(a)) <= 1e-10 * a.frobenius_norm());
  }
}

TEST_CASE("relative operator norm") {
  const double d41[] = {4, 1};
  const SpdOperator p = cholesky(SymmetricMatrix::diagonal(d41));
  CHECK(relative_operator_norm(SymmetricMatrix::identity(2), p) == doctest::Approx(1.0));

  Rng rng = make_rng(16, 0);
  for (int k = 0; k < 20; ++k) {
    const SymmetricMatrix a = test::random_symmetric(5, rng);
    CHECK(std::abs(relative_operator_norm(a, SpdOperator::identity(5)) - operator_norm(a)) <= 1e-12 * operator_norm(a));

    const Eigen::MatrixXd e = to_eigen(test::random_symmetric(5, rng));
    const Eigen::MatrixXd m = e * e.transpose() + 0.1 * Eigen::MatrixXd::Identity(5, 5);
    SymmetricMatrix pm(5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i; j < 5; ++j) pm.set(i, j, m(Eigen::Index(i), Eigen::Index(j)));
    // Generalized eigenproblem A v = λ P v: its spectral radius is ‖P^{-1/2} A P^{-1/2}‖₂.
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(to_eigen(a), to_eigen(pm));
    const double want = ges.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(test::rel_err(relative_operator_norm(a, cholesky(pm)), want) <= 1e-8);
  }
}

TEST_CASE("eigen_floor") {
  const double d[] = {3, -2};
  const SpdOperator f = eigen_floor(SymmetricMatrix::diagonal(d), 0.5);
  CHECK(f.matrix()(0, 0) == doctest::Approx(3.0));
  CHECK(f.matrix()(1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(f.matrix()(0, 1)) <= 1e-14);

  Rng rng = make_rng(17, 0);
  for (int k = 0; k < 30; ++k) {
    const SymmetricMatrix a = test::random_symmetric(5, rng);
    const SpdOperator out = eigen_floor(a, 0.008);
    CHECK(min_eigenvalue(out.matrix()) >= 0.008 * (1 - 1e-10));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(out.matrix() - a));
    CHECK(es.eigenvalues()(0) >= -1e-10 * a.frobenius_norm());
    const SpdOperator twice = eigen_floor(out.matrix(), 0.008);
    CHECK(test::max_abs_diff(to_eigen(twice.matrix()), to_eigen(out.matrix())) <= 1e-10);
  }

  const SymmetricMatrix spd = SymmetricMatrix::identity(3, 2.0);
  CHECK(eigen_floor(spd, 0.5).matrix() == spd);
}

TEST_CASE("dimension mismatches throw") {
  CHECK_THROWS_AS(dot(Vector{1, 2}, Vector{1}), DimensionMismatch);
  CHECK_THROWS_AS(SpdOperator::identity(3).solve(Vector{1, 2}), DimensionMismatch);
  CHECK_THROWS_AS(SymmetricMatrix::identity(2) + SymmetricMatrix::identity(3), DimensionMismatch);
}

TEST_CASE("symmetric storage is exact") {
  Rng rng = make_rng(18, 0);
  const SymmetricMatrix a = test::random_symmetric(6, rng);
  const SymmetricMatrix b = convex_combination(a, SymmetricMatrix::identity(6), 0.3);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(b(i, j) == b(j, i));
}
