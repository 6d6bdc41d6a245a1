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

#include "alsncg/linesearch.hpp"

#include <algorithm>
#include <stdexcept>

#include "alsncg/parallel.hpp"

namespace alsncg::linesearch {

namespace {

struct Kahan5 {
  std::array<double, 5> sum{};
  std::array<double, 5> comp{};

  void add(int n, double v) {
    const double y = v - comp[n];
    const double t = sum[n] + y;
    comp[n] = (t - sum[n]) - y;
    sum[n] = t;
  }
};

inline double dot_nf(const double* a, const double* b, int n_f) {
  double acc = 0.0;
  for (int k = 0; k < n_f; ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

QuarticPoly quartic_coefficients(const FlatVector& x, const FlatVector& p,
                                 const RatingsMatrix& ratings, double lambda,
                                 int n_chunks, int n_workers) {
  if (!x.same_shape(p)) throw std::invalid_argument("quartic_coefficients: shape mismatch");
  if (x.n_u != ratings.n_users() || x.n_m != ratings.n_items())
    throw std::invalid_argument("quartic_coefficients: vector/ratings dimension mismatch");
  const int n_f = x.n_f;
  const int n_u = x.n_u;
  const int n_m = x.n_m;
  n_chunks = std::max(1, n_chunks);

  // Chunk c covers users [c*n_u/n_chunks, (c+1)*n_u/n_chunks) plus the item
  // range split the same way; boundaries depend only on n_chunks.
  std::vector<Kahan5> partial(static_cast<std::size_t>(n_chunks));
  parallel::parallel_for(n_chunks, n_workers, [&](int c) {
    Kahan5 acc;
    const int ulo = static_cast<int>(static_cast<std::int64_t>(c) * n_u / n_chunks);
    const int uhi = static_cast<int>(static_cast<std::int64_t>(c + 1) * n_u / n_chunks);
    for (int i = ulo; i < uhi; ++i) {
      const double* xu = x.user_col(i);
      const double* pu = p.user_col(i);
      const int count = ratings.user_count(i);
      if (lambda > 0.0 && count > 0) {
        const double w = lambda * count;
        acc.add(0, w * dot_nf(xu, xu, n_f));
        acc.add(1, 2.0 * w * dot_nf(xu, pu, n_f));
        acc.add(2, w * dot_nf(pu, pu, n_f));
      }
      const auto items = ratings.user_items(i);
      const auto values = ratings.user_values(i);
      for (std::size_t t = 0; t < items.size(); ++t) {
        const double* xm = x.item_col(items[t]);
        const double* pm = p.item_col(items[t]);
        // Residual along the step: a - b*alpha - d*alpha^2.
        const double a = values[t] - dot_nf(xu, xm, n_f);
        const double b = dot_nf(xu, pm, n_f) + dot_nf(pu, xm, n_f);
        const double d = dot_nf(pu, pm, n_f);
        acc.add(0, a * a);
        acc.add(1, -2.0 * a * b);
        acc.add(2, b * b - 2.0 * a * d);
        acc.add(3, 2.0 * b * d);
        acc.add(4, d * d);
      }
    }
    if (lambda > 0.0) {
      const int mlo = static_cast<int>(static_cast<std::int64_t>(c) * n_m / n_chunks);
      const int mhi = static_cast<int>(static_cast<std::int64_t>(c + 1) * n_m / n_chunks);
      for (int j = mlo; j < mhi; ++j) {
        const int count = ratings.item_count(j);
        if (count == 0) continue;
        const double* xm = x.item_col(j);
        const double* pm = p.item_col(j);
        const double w = lambda * count;
        acc.add(0, w * dot_nf(xm, xm, n_f));
        acc.add(1, 2.0 * w * dot_nf(xm, pm, n_f));
        acc.add(2, w * dot_nf(pm, pm, n_f));
      }
    }
    partial[static_cast<std::size_t>(c)] = acc;
  });

  QuarticPoly q;
  for (int c = 0; c < n_chunks; ++c)
    for (int n = 0; n < 5; ++n) q.c[n] += partial[c].sum[n];
  return q;
}

double armijo_slope(const FlatVector& g, const FlatVector& p) { return dot(g, p); }

LineSearchResult backtracking_search(const QuarticPoly& q, double slope,
                                     double alpha0, double c, double tau,
                                     int max_backtracks) {
  if (alpha0 <= 0.0) throw std::invalid_argument("backtracking_search: alpha0 must be > 0");
  if (!(c > 0.0 && c < 1.0) || !(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("backtracking_search: c and tau must be in (0,1)");
  if (!(slope < 0.0)) return {LineSearchStatus::kNotDescent, 0.0, 0};

  const double q0 = q(0.0);
  double alpha = alpha0;
  for (int k = 0; k <= max_backtracks; ++k) {
    if (q(alpha) - q0 <= alpha * c * slope)
      return {LineSearchStatus::kAccepted, alpha, k};
    alpha *= tau;
  }
  return {LineSearchStatus::kMaxBacktracks, 0.0, max_backtracks};
}

}  // namespace alsncg::linesearch
