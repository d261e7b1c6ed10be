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

#pragma once

#include <span>
#include <string>

#include "lap/linalg.hpp"

namespace lap {

// Closed convex non-empty region: all of Rⁿ, a box, or a Euclidean ball.
class FeasibleSet {
 public:
  enum class Kind { kWholeSpace, kBox, kBall };

  FeasibleSet() = default;  // whole space
  static FeasibleSet whole_space() { return FeasibleSet(); }
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet ball(Vector center, double radius);

  Kind kind() const noexcept { return kind_; }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

  bool contains(std::span<const double> x, double tol = 1e-12) const;

 private:
  Kind kind_ = Kind::kWholeSpace;
  Vector lower_, upper_, center_;
  double radius_ = 0.0;
};

const char* to_string(FeasibleSet::Kind kind);

// Euclidean nearest point of q.
Vector project(const FeasibleSet& q, std::span<const double> y);

// arg min over q of ‖x − y‖_P. Boxes use a primal active-set method on the
// bound-constrained QP; balls solve the secular equation for the multiplier.
Vector project_metric(const FeasibleSet& q, const SpdOperator& p, std::span<const double> y);

enum class ProjectionMetric {
  kPreconditioner,  // exact arg-min of α⟨g, x − x_t⟩ + ½‖x − x_t‖²_P over q
  kEuclidean,       // Euclidean projection of x_t − α P⁻¹ g
};

const char* to_string(ProjectionMetric metric);
ProjectionMetric projection_metric_from_string(const std::string& name);

Vector prox_step(const FeasibleSet& q, const SpdOperator& p, std::span<const double> x, double alpha,
                 std::span<const double> g, ProjectionMetric metric = ProjectionMetric::kPreconditioner);

}  // namespace lap
