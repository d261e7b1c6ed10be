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

#include "lap/preconditioner.hpp"

#include <string>

namespace lap {

LapState LapState::initial(std::size_t n, double mu) {
  return LapState{SpdOperator::identity(n), 0, mu, 1.0, 0.0, 0.0};
}

SpdOperator averaged_preconditioner(const SpdOperator& p_old, const SpdOperator& h, double beta, double mu) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "averaging rate " + std::to_string(beta) + " is outside [0, 1]");
  }
  return eigen_floor(convex_combination(p_old.matrix(), h.matrix(), beta), mu);
}

LapState ema_update(const LapState& state, const SpdOperator& h, double beta) {
  if (h.dim() != state.p.dim()) throw DimensionMismatch("ema_update");
  SpdOperator next = averaged_preconditioner(state.p, h, beta, state.mu);
  const double update_norm = operator_norm(h.matrix() - state.p.matrix());
  const double residual = operator_norm(h.matrix() - next.matrix());
  return LapState{std::move(next), state.t + 1, state.mu, state.delta, update_norm, residual};
}

Vector precondition(const LapState& state, std::span<const double> g) { return state.p.solve(g); }

PrecisionDiagnostics precision_diagnostics(const LapState& state, const SymmetricMatrix& true_hessian) {
  const SymmetricMatrix diff = true_hessian - state.p.matrix();
  return PrecisionDiagnostics{relative_operator_norm(diff, state.p), operator_norm(diff)};
}

}  // namespace lap
