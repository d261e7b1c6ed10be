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

#include <cmath>

#include "doctest.h"
#include "lap/feasible_set.hpp"
#include "lap/verify.hpp"
#include "support.hpp"

using namespace lap;

TEST_CASE("project examples") {
  const Vector y = {2, -1};
  CHECK(project(FeasibleSet::whole_space(), y) == y);
  CHECK(project(FeasibleSet::box({0, 0}, {1, 1}), y) == Vector{1, 0});
  const Vector b = project(FeasibleSet::ball({0, 0}, 1.0), Vector{3, 4});
  CHECK(b[0] == doctest::Approx(0.6));
  CHECK(b[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(project(FeasibleSet::box({0, 0}, {1, 1}), Vector{1, 2, 3}), DimensionMismatch);
}

TEST_CASE("invalid sets are rejected") {
  CHECK_THROWS(FeasibleSet::box({1, 0}, {0, 1}));
  CHECK_THROWS(FeasibleSet::ball({0, 0}, 0.0));
}

TEST_CASE("projection idempotence and membership") {
  Rng rng = make_rng(21, 0);
  for (int k = 0; k < 200; ++k) {
    const FeasibleSet box = FeasibleSet::box({-1, -2, 0}, {1, 0.5, 0});
    const FeasibleSet ball = FeasibleSet::ball(test::random_vector(3, rng), 0.7);
    for (const FeasibleSet& q : {box, ball}) {
      const Vector y = test::random_vector(3, rng, 3.0);
      const Vector p = project(q, y);
      CHECK(q.contains(p));
      const Vector pp = project(q, p);
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(pp[i] - p[i]) <= 1e-14);
      const Vector inside = q.kind() == FeasibleSet::Kind::kBall
                                ? add(q.center(), test::random_vector(3, rng, 0.01))
                                : project(q, test::random_vector(3, rng, 0.01));
      CHECK(project(q, inside) == inside);
    }
  }
}

TEST_CASE("prox_step examples") {
  const SpdOperator id = SpdOperator::identity(2);
  const Vector s = prox_step(FeasibleSet::whole_space(), id, Vector{0, 0}, 0.5, Vector{2, 2});
  CHECK(s == Vector{-1, -1});
  const FeasibleSet box = FeasibleSet::box({-1, -1}, {1, 1});
  for (ProjectionMetric m : {ProjectionMetric::kPreconditioner, ProjectionMetric::kEuclidean}) {
    const Vector c = prox_step(box, id, Vector{0, 0}, 1.0, Vector{-3, 0.5}, m);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(-0.5));
  }
}

TEST_CASE("unconstrained prox_step satisfies KKT") {
  Rng rng = make_rng(22, 0);
  for (int k = 0; k < 100; ++k) {
    const SpdOperator p(random_spd(5, rng, 1e-2, 1e2));
    const Vector x = test::random_vector(5, rng);
    const Vector g = test::random_vector(5, rng);
    const double alpha = 0.3;
    const Vector next = prox_step(FeasibleSet::whole_space(), p, x, alpha, g);
    const Vector kkt = add_scaled(p.matrix().apply(subtract(next, x)), alpha, g);
    CHECK(norm2(kkt) <= 1e-10 * alpha * norm2(g) * std::max(1.0, operator_norm(p.matrix())));
  }
}

TEST_CASE("P-metric step is the constrained arg-min") {
  // Optimality of x⁺ = arg min_Q α⟨g, x − x_t⟩ + ½‖x − x_t‖²_P: for every z ∈ Q,
  // ⟨αg + P(x⁺ − x_t), z − x⁺⟩ ≥ 0.
  Rng rng = make_rng(23, 0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const SpdOperator p(random_spd(4, rng, 1e-2, 1e2));
    const FeasibleSet box = FeasibleSet::box({-1, -1, -1, -1}, {1, 1, 1, 1});
    const FeasibleSet ball = FeasibleSet::ball({0, 0, 0, 0}, 1.0);
    for (const FeasibleSet& q : {box, ball}) {
      const Vector x = project(q, test::random_vector(4, rng, 0.5));
      const Vector g = test::random_vector(4, rng, 10.0);
      const Vector next = prox_step(q, p, x, 1.0, g);
      CHECK(q.contains(next));
      const Vector grad = add(g, p.matrix().apply(subtract(next, x)));
      for (int j = 0; j < 20; ++j) {
        Vector z(4);
        for (double& v : z) v = unit(rng);
        z = project(q, z);
        CHECK(dot(grad, subtract(z, next)) >= -1e-8 * norm2(grad));
      }
    }
  }
}

TEST_CASE("degenerate box is a single point") {
  const FeasibleSet q = FeasibleSet::box({0.5, -0.5}, {0.5, -0.5});
  Rng rng = make_rng(24, 0);
  for (int k = 0; k < 50; ++k) {
    const Vector y = test::random_vector(2, rng);
    CHECK(project(q, y) == Vector{0.5, -0.5});
    const Vector x = {0.5, -0.5};
    CHECK(norm2(subtract(project(q, y), x)) <= norm2(subtract(y, x)) + 1e-12);
  }
}
