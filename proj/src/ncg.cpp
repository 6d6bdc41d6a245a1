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

#include "alsncg/ncg.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "alsncg/als.hpp"
#include "alsncg/linesearch.hpp"
#include "alsncg/parallel.hpp"
#include "stopwatch.hpp"

namespace alsncg::ncg {

namespace {

inline double dot_nf(const double* a, const double* b, int n_f) {
  double acc = 0.0;
  for (int k = 0; k < n_f; ++k) acc += a[k] * b[k];
  return acc;
}

void check_shape(const FlatVector& x, const RatingsMatrix& ratings) {
  if (x.n_u != ratings.n_users() || x.n_m != ratings.n_items())
    throw std::invalid_argument("vector/ratings dimension mismatch");
}

}  // namespace

double loss(const FlatVector& x, const RatingsMatrix& ratings, double lambda) {
  check_shape(x, ratings);
  const int n_f = x.n_f;
  double sq = 0.0;
  for (int i = 0; i < ratings.n_users(); ++i) {
    const double* u = x.user_col(i);
    const auto items = ratings.user_items(i);
    const auto values = ratings.user_values(i);
    for (std::size_t t = 0; t < items.size(); ++t) {
      const double e = values[t] - dot_nf(u, x.item_col(items[t]), n_f);
      sq += e * e;
    }
  }
  if (lambda == 0.0) return sq;
  double reg_u = 0.0;
  for (int i = 0; i < ratings.n_users(); ++i) {
    const double* u = x.user_col(i);
    reg_u += ratings.user_count(i) * dot_nf(u, u, n_f);
  }
  double reg_m = 0.0;
  for (int j = 0; j < ratings.n_items(); ++j) {
    const double* m = x.item_col(j);
    reg_m += ratings.item_count(j) * dot_nf(m, m, n_f);
  }
  return sq + lambda * (reg_u + reg_m);
}

FlatVector gradient(const FlatVector& x, const RatingsMatrix& ratings, double lambda,
                    int n_workers) {
  check_shape(x, ratings);
  const int n_f = x.n_f;
  FlatVector g = FlatVector::zeros(n_f, x.n_u, x.n_m);

  // Blocks write disjoint columns, so the chunking is free to follow the
  // worker count without affecting the result.
  const int user_chunks = std::max(1, std::min(x.n_u, n_workers * 4));
  parallel::parallel_for(user_chunks, n_workers, [&](int c) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(c) * x.n_u / user_chunks);
    const int hi = static_cast<int>(static_cast<std::int64_t>(c + 1) * x.n_u / user_chunks);
    for (int i = lo; i < hi; ++i) {
      const double* u = x.user_col(i);
      double* gu = g.user_col(i);
      const double w = 2.0 * lambda * ratings.user_count(i);
      for (int k = 0; k < n_f; ++k) gu[k] = w * u[k];
      const auto items = ratings.user_items(i);
      const auto values = ratings.user_values(i);
      for (std::size_t t = 0; t < items.size(); ++t) {
        const double* m = x.item_col(items[t]);
        const double e2 = 2.0 * (dot_nf(u, m, n_f) - values[t]);
        for (int k = 0; k < n_f; ++k) gu[k] += e2 * m[k];
      }
    }
  });

  const int item_chunks = std::max(1, std::min(x.n_m, n_workers * 4));
  parallel::parallel_for(item_chunks, n_workers, [&](int c) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(c) * x.n_m / item_chunks);
    const int hi = static_cast<int>(static_cast<std::int64_t>(c + 1) * x.n_m / item_chunks);
    for (int j = lo; j < hi; ++j) {
      const double* m = x.item_col(j);
      double* gm = g.item_col(j);
      const double w = 2.0 * lambda * ratings.item_count(j);
      for (int k = 0; k < n_f; ++k) gm[k] = w * m[k];
      const auto users = ratings.item_users(j);
      const auto values = ratings.item_values(j);
      for (std::size_t t = 0; t < users.size(); ++t) {
        const double* u = x.user_col(users[t]);
        const double e2 = 2.0 * (dot_nf(u, m, n_f) - values[t]);
        for (int k = 0; k < n_f; ++k) gm[k] += e2 * u[k];
      }
    }
  });
  return g;
}

double beta_bar(const FlatVector& g_next, const FlatVector& g_prev,
                const FlatVector& gbar_next, const FlatVector& gbar_prev) {
  if (!g_next.same_shape(g_prev) || !gbar_next.same_shape(g_next) ||
      !gbar_prev.same_shape(g_next))
    throw std::invalid_argument("beta_bar: shape mismatch");
  const double den = dot(gbar_prev, g_prev);
  if (std::abs(den) < 1e-30) return 0.0;
  double num = 0.0;
  for (std::size_t k = 0; k < gbar_next.user_part.size(); ++k)
    num += gbar_next.user_part[k] * (g_next.user_part[k] - g_prev.user_part[k]);
  for (std::size_t k = 0; k < gbar_next.item_part.size(); ++k)
    num += gbar_next.item_part[k] * (g_next.item_part[k] - g_prev.item_part[k]);
  const double beta = num / den;
  return std::isfinite(beta) ? beta : 0.0;
}

double normalized_grad_norm(const FlatVector& g) {
  return norm(g) / static_cast<double>(g.size());
}

SolveResult als_ncg_solve(const RatingsMatrix& ratings, const SolverConfig& config,
                          const SnapshotSink& snapshot, const NcgOverrides& overrides) {
  config.validate();
  const int n_blocks = config.resolved_blocks();
  const auto plan = parallel::SweepPlan::build(ratings, n_blocks);
  const std::int64_t tm_columns = plan.t_m.total_columns();
  const std::int64_t tu_columns = plan.t_u.total_columns();
  const std::int64_t sweep_columns = tm_columns + tu_columns;
  // The gradient shuffles both factor sides; the quartic build ships only the
  // item-side blocks of x and p.
  const std::int64_t gradient_columns = sweep_columns;
  const std::int64_t quartic_columns = 2 * tm_columns;

  SolveResult result;
  result.fallback_columns = 0;

  FactorModel model = random_init(config.n_f, ratings.n_users(), ratings.n_items(), config.seed);
  FlatVector x = flatten(model);

  Stopwatch watch;
  auto instrumented = [&](auto&& fn) {
    if (config.paper_timing) watch.stop();
    fn();
    if (config.paper_timing) watch.start();
  };

  // One ALS application; the preconditioner map.
  auto apply_als = [&](const FlatVector& v) -> FlatVector {
    FactorModel m = unflatten(v);
    auto users = parallel_half_sweep(parallel::HalfSweepKind::kUsers, m, ratings,
                                     config.lambda, plan, config.n_workers);
    m.user_data = std::move(users.columns);
    auto items = parallel_half_sweep(parallel::HalfSweepKind::kItems, m, ratings,
                                     config.lambda, plan, config.n_workers);
    m.item_data = std::move(items.columns);
    result.fallback_columns +=
        users.solve_stats.fallback_columns + items.solve_stats.fallback_columns;
    return flatten(m);
  };

  FlatVector g = gradient(x, ratings, config.lambda, config.n_workers);
  double grad_norm = normalized_grad_norm(g);
  result.trace.append({0, loss(x, ratings, config.lambda), grad_norm, 0.0, 0, 0, false});
  if (snapshot && config.snapshot_every > 0) snapshot(unflatten(x), 0);

  bool converged = config.tol > 0.0 && grad_norm < config.tol;
  int k = 0;
  if (!converged && config.max_iters > 0) {
    watch.start();
    FlatVector p_x = apply_als(x);
    FlatVector gbar = axpby(1.0, x, -1.0, p_x);
    FlatVector p = axpby(-1.0, gbar, 0.0, gbar);
    bool p_is_neg_gbar = true;
    bool restart_pending = false;
    std::int64_t step_columns = sweep_columns + gradient_columns;  // setup work

    while (!converged && k < config.max_iters) {
      bool restarted = restart_pending;
      restart_pending = false;
      double slope = dot(g, p);
      if (slope >= 0.0 && !p_is_neg_gbar) {
        // The conjugate direction stopped being a descent direction; restart
        // from the preconditioned steepest descent.
        p = axpby(-1.0, gbar, 0.0, gbar);
        p_is_neg_gbar = true;
        restarted = true;
        slope = dot(g, p);
      }

      bool pure_als_step = false;
      double alpha = 0.0;
      int backtracks = 0;
      if (overrides.fixed_alpha) {
        alpha = *overrides.fixed_alpha;
      } else if (slope >= 0.0) {
        pure_als_step = true;
      } else {
        const QuarticPoly q = linesearch::quartic_coefficients(
            x, p, ratings, config.lambda, n_blocks, config.n_workers);
        step_columns += quartic_columns;
        const auto ls = linesearch::backtracking_search(
            q, slope, config.alpha0, config.armijo_c, config.tau, config.max_backtracks);
        if (ls.status == linesearch::LineSearchStatus::kAccepted) {
          alpha = ls.alpha;
          backtracks = ls.backtracks;
        } else {
          pure_als_step = true;
        }
      }

      FlatVector x_next;
      if (pure_als_step) {
        // Sufficient decrease was unreachable along p; the ALS application is
        // already computed and never increases the loss.
        x_next = p_x;
        restarted = true;
        ++result.fallback_steps;
      } else if (p_is_neg_gbar && alpha == 1.0) {
        // A unit step along -gbar lands exactly on P(x); taking it directly
        // avoids the rounding of x + (P(x) - x).
        x_next = p_x;
      } else {
        x_next = axpby(1.0, x, alpha, p);
      }

#ifndef NDEBUG
      if (!pure_als_step && !overrides.fixed_alpha) {
        // The quartic is exact, so the accepted step must also satisfy the
        // sufficient decrease test against the directly evaluated loss.
        const double f0 = loss(x, ratings, config.lambda);
        const double f1 = loss(x_next, ratings, config.lambda);
        assert(f1 - f0 <= alpha * config.armijo_c * slope + 1e-9 * std::max(1.0, std::abs(f0)));
      }
#endif

      FlatVector g_next = gradient(x_next, ratings, config.lambda, config.n_workers);
      step_columns += gradient_columns;
      FlatVector p_x_next = apply_als(x_next);
      step_columns += sweep_columns;
      FlatVector gbar_next = axpby(1.0, x_next, -1.0, p_x_next);

      double beta = 0.0;
      if (!overrides.force_beta_zero && !pure_als_step)
        beta = beta_bar(g_next, g, gbar_next, gbar);

      FlatVector p_next;
      if (beta == 0.0) {
        p_next = axpby(-1.0, gbar_next, 0.0, gbar_next);
        p_is_neg_gbar = true;
      } else {
        p_next = axpby(-1.0, gbar_next, beta, p);
        p_is_neg_gbar = false;
        if (dot(g_next, p_next) >= 0.0) {
          p_next = axpby(-1.0, gbar_next, 0.0, gbar_next);
          p_is_neg_gbar = true;
          restart_pending = true;
        }
      }

      x = std::move(x_next);
      g = std::move(g_next);
      gbar = std::move(gbar_next);
      p_x = std::move(p_x_next);
      p = std::move(p_next);
      ++k;
      if (restarted) ++result.restarts;

      grad_norm = normalized_grad_norm(g);
      converged = config.tol > 0.0 && grad_norm < config.tol;
      const bool record = k % config.trace_every == 0 || converged || k == config.max_iters;
      if (record) {
        double loss_value = 0.0;
        instrumented([&] { loss_value = loss(x, ratings, config.lambda); });
        result.trace.append(
            {k, loss_value, grad_norm, watch.seconds(), backtracks, step_columns, restarted});
        step_columns = 0;  // counts transfers since the previous record
      }
      if (snapshot && config.snapshot_every > 0 && k % config.snapshot_every == 0)
        snapshot(unflatten(x), k);
    }
    watch.stop();
  }

  result.model = unflatten(x);
  result.converged = converged;
  result.iterations = k;
  result.final_grad_norm = grad_norm;
  result.final_loss = loss(x, ratings, config.lambda);
  return result;
}

}  // namespace alsncg::ncg
