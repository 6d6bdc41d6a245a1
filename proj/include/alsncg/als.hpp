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

#include <vector>

#include "alsncg/config.hpp"
#include "alsncg/factors.hpp"
#include "alsncg/ratings.hpp"

namespace alsncg::als {

struct SolveStats {
  int fallback_columns = 0;  // columns solved by the least-norm path
};

// Solves one regularized normal-equation column:
//   (sum_t cols[idx[t]] cols[idx[t]]^T + lambda*count*I) out = sum_t vals[t] cols[idx[t]]
// with count > 0 entries accumulated in index order. The regularized (SPD)
// case goes through a Cholesky factorization; unregularized columns, where
// the Gram matrix may be singular, take a least-norm solve instead and bump
// stats.fallback_columns. cols[j] must point at the length-n_f factor column
// for every j appearing in idx.
void solve_normal_column(const int* idx, const double* vals, int count,
                         const double* const* cols, int n_f, double lambda,
                         double* out, SolveStats& stats);

// Recomputes every user factor column from the item factors in `model`
// (columns with no ratings become zero). Returns the new n_f x n_u
// column-major data; `model` is untouched.
std::vector<double> update_users(const FactorModel& model, const RatingsMatrix& ratings,
                                 double lambda, SolveStats* stats = nullptr);
/// Mirror image of update_users for the item factor columns.
std::vector<double> update_items(const FactorModel& model, const RatingsMatrix& ratings,
                                 double lambda, SolveStats* stats = nullptr);

// One alternating-least-squares iteration applied to the flattened iterate:
// the user half-sweep reads x's item part, then the item half-sweep reads the
// freshly updated user part. This is the preconditioner map P(x).
FlatVector als_sweep(const FlatVector& x, const RatingsMatrix& ratings, double lambda);

// Standalone ALS solver: seeded random start, repeated sweeps until
// (1/N)||g|| < tol or max_iters. Non-convergence is reported in the result,
// not thrown.
SolveResult als_solve(const RatingsMatrix& ratings, const SolverConfig& config,
                      const SnapshotSink& snapshot = {});

}  // namespace alsncg::als
