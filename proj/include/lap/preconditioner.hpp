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

// Exponential moving average of Hessian samples with an eigenvalue floor.

#pragma once

#include <cstddef>
#include <span>

#include "lap/linalg.hpp"

namespace lap {

struct LapState {
  SpdOperator p;                  // current P_t
  std::size_t t = 0;              // number of updates applied
  double mu = 1e-8;               // floor applied at the next update
  double delta = 1.0;             // scheduled precision bound Δ_t
  double last_update_norm = 0.0;  // ‖H_t − P_{t−1}‖_op of the latest update
  double residual_norm = 0.0;     // ‖H_t − P_t‖_op after the latest update

  // P_{−1} = I.
  static LapState initial(std::size_t n, double mu);
};

// eigen_floor((1 − β)·p_old + β·h, mu)
SpdOperator averaged_preconditioner(const SpdOperator& p_old, const SpdOperator& h, double beta, double mu);

// P ← P + β(H − P), floored at state.mu. β must lie in [0, 1].
LapState ema_update(const LapState& state, const SpdOperator& h, double beta);

Vector precondition(const LapState& state, std::span<const double> g);

struct PrecisionDiagnostics {
  double delta_rel = 0.0;  // ‖∇²f − P‖_{op,P}
  double delta_op = 0.0;   // ‖∇²f − P‖_op
};
PrecisionDiagnostics precision_diagnostics(const LapState& state, const SymmetricMatrix& true_hessian);

}  // namespace lap
