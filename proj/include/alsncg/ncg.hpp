// Copyright 2026 the alsncg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>

#include "alsncg/config.hpp"
#include "alsncg/factors.hpp"
#include "alsncg/ratings.hpp"

namespace alsncg::ncg {

// Regularized squared loss over the known ratings:
//   sum_(i,j) (r_ij - u_i'm_j)^2
//   + lambda * (sum_i n_ui ||u_i||^2 + sum_j n_mj ||m_j||^2).
// Summation order is fixed (by user, then by sorted item index) so repeated
// evaluations are bit-identical.
double loss(const FlatVector& x, const RatingsMatrix& ratings, double lambda);

// Exact gradient of the loss. User block i is
//   2*lambda*n_ui*u_i + 2*sum_{j in I_i} m_j (u_i'm_j - r_ij),
// item blocks analogous; computed in two passes (user-major, then
// item-major) with a fixed per-block accumulation order. Blocks are
// independent, so the result does not depend on n_workers.
FlatVector gradient(const FlatVector& x, const RatingsMatrix& ratings, double lambda,
                    int n_workers = 1);

// Preconditioned Polak-Ribiere update parameter
//   beta = gbar_next' (g_next - g_prev) / (gbar_prev' g_prev).
// Returns 0 when the denominator underflows (|den| < 1e-30) or the result is
// not finite, which restarts the direction.
double beta_bar(const FlatVector& g_next, const FlatVector& g_prev,
                const FlatVector& gbar_next, const FlatVector& gbar_prev);

/// ||g|| / N with N = n_f*(n_u+n_m); the convergence measure.
double normalized_grad_norm(const FlatVector& g);

// Test hooks for the driver: pin the step length and/or force beta to zero.
// With both set (alpha = 1), the iteration reproduces plain ALS exactly.
struct NcgOverrides {
  std::optional<double> fixed_alpha;
  bool force_beta_zero = false;
};

// ALS-accelerated nonlinear conjugate gradient solver. Each iteration applies
// one ALS sweep P to form the preconditioned gradient gbar = x - P(x),
// searches along p with the single-pass quartic backtracking line search, and
// updates the direction with beta_bar. A failed line search or a non-descent
// direction falls back to the plain ALS step x <- P(x) with a direction
// restart, so progress never stalls.
SolveResult als_ncg_solve(const RatingsMatrix& ratings, const SolverConfig& config,
                          const SnapshotSink& snapshot = {},
                          const NcgOverrides& overrides = {});

}  // namespace alsncg::ncg
