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

#include "alsncg/config.hpp"
#include "alsncg/factors.hpp"
#include "alsncg/ratings.hpp"

namespace alsncg::linesearch {

// Exact degree-4 expansion of the regularized squared loss along direction p:
// Q(alpha) = loss(x + alpha*p). Computed in a single pass over the known
// ratings using only dot products of the per-user/per-item blocks of x and p.
// The pass is split into n_chunks fixed contiguous ranges whose partial sums
// are compensated (Kahan) and merged in chunk order, so the result is
// deterministic and independent of n_workers.
QuarticPoly quartic_coefficients(const FlatVector& x, const FlatVector& p,
                                 const RatingsMatrix& ratings, double lambda,
                                 int n_chunks = 1, int n_workers = 1);

/// Directional derivative g'p used in the sufficient-decrease test.
double armijo_slope(const FlatVector& g, const FlatVector& p);

enum class LineSearchStatus {
  kAccepted,
  kNotDescent,     // slope >= 0 on entry
  kMaxBacktracks,  // sufficient decrease never met within the shrink cap
};

struct LineSearchResult {
  LineSearchStatus status = LineSearchStatus::kNotDescent;
  double alpha = 0.0;
  int backtracks = 0;
};

// Backtracking search on the quartic profile: returns the first
// alpha = alpha0 * tau^k with Q(alpha) - Q(0) <= alpha * c * slope, together
// with the number k of shrinks used. Evaluating Q is O(1), so the loop never
// touches the ratings data.
LineSearchResult backtracking_search(const QuarticPoly& q, double slope,
                                     double alpha0, double c, double tau,
                                     int max_backtracks);

}  // namespace alsncg::linesearch
