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

#include "alsncg/als.hpp"

#include <Eigen/Dense>

#include "alsncg/ncg.hpp"
#include "alsncg/parallel.hpp"
#include "stopwatch.hpp"

namespace alsncg::als {

namespace {

// Workspace reused across the columns of one task; every field is fully
// overwritten per column.
struct ColumnWorkspace {
  Eigen::MatrixXd a;
  Eigen::VectorXd v;
  Eigen::VectorXd u;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

thread_local ColumnWorkspace tl_workspace;

}  // namespace

void solve_normal_column(const int* idx, const double* vals, int count,
                         const double* const* cols, int n_f, double lambda,
                         double* out, SolveStats& stats) {
  ColumnWorkspace& ws = tl_workspace;
  ws.a.setZero(n_f, n_f);
  ws.v.setZero(n_f);

  // Rank-1 accumulation over the rated columns in index order (lower
  // triangle only, mirrored below).
  for (int t = 0; t < count; ++t) {
    const double* m = cols[idx[t]];
    const double r = vals[t];
    for (int a = 0; a < n_f; ++a) {
      const double ma = m[a];
      ws.v(a) += r * ma;
      for (int b = 0; b <= a; ++b) ws.a(a, b) += ma * m[b];
    }
  }
  const double shift = lambda * count;
  for (int d = 0; d < n_f; ++d) ws.a(d, d) += shift;
  for (int a = 0; a < n_f; ++a)
    for (int b = a + 1; b < n_f; ++b) ws.a(a, b) = ws.a(b, a);

  bool solved = false;
  if (shift > 0.0) {
    ws.llt.compute(ws.a);
    if (ws.llt.info() == Eigen::Success) {
      ws.u = ws.llt.solve(ws.v);
      solved = true;
    }
  }
  if (!solved) {
    // Unregularized (or numerically non-SPD) system: the Gram matrix may be
    // singular, so take the least-norm solution. The right-hand side lies in
    // the range of the Gram matrix, which keeps the residual at rounding
    // level; the minimal norm also keeps that level as small as possible.
    // One refinement step tightens the residual further.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ws.a);
    ws.u = cod.solve(ws.v);
    ws.u += cod.solve(ws.v - ws.a * ws.u);
    ++stats.fallback_columns;
  }
  for (int k = 0; k < n_f; ++k) out[k] = ws.u(k);
}

std::vector<double> update_users(const FactorModel& model, const RatingsMatrix& ratings,
                                 double lambda, SolveStats* stats) {
  const int n_f = model.n_f;
  std::vector<double> out(static_cast<std::size_t>(n_f) * ratings.n_users(), 0.0);
  std::vector<const double*> cols(static_cast<std::size_t>(ratings.n_items()));
  for (int j = 0; j < ratings.n_items(); ++j) cols[j] = model.item_col(j);

  SolveStats local;
  for (int i = 0; i < ratings.n_users(); ++i) {
    const auto idx = ratings.user_items(i);
    if (idx.empty()) continue;
    solve_normal_column(idx.data(), ratings.user_values(i).data(),
                        static_cast<int>(idx.size()), cols.data(), n_f, lambda,
                        out.data() + static_cast<std::size_t>(i) * n_f, local);
  }
  if (stats) stats->fallback_columns += local.fallback_columns;
  return out;
}

std::vector<double> update_items(const FactorModel& model, const RatingsMatrix& ratings,
                                 double lambda, SolveStats* stats) {
  const int n_f = model.n_f;
  std::vector<double> out(static_cast<std::size_t>(n_f) * ratings.n_items(), 0.0);
  std::vector<const double*> cols(static_cast<std::size_t>(ratings.n_users()));
  for (int i = 0; i < ratings.n_users(); ++i) cols[i] = model.user_col(i);

  SolveStats local;
  for (int j = 0; j < ratings.n_items(); ++j) {
    const auto idx = ratings.item_users(j);
    if (idx.empty()) continue;
    solve_normal_column(idx.data(), ratings.item_values(j).data(),
                        static_cast<int>(idx.size()), cols.data(), n_f, lambda,
                        out.data() + static_cast<std::size_t>(j) * n_f, local);
  }
  if (stats) stats->fallback_columns += local.fallback_columns;
  return out;
}

FlatVector als_sweep(const FlatVector& x, const RatingsMatrix& ratings, double lambda) {
  FactorModel model = unflatten(x);
  model.user_data = update_users(model, ratings, lambda);
  model.item_data = update_items(model, ratings, lambda);
  return flatten(model);
}

SolveResult als_solve(const RatingsMatrix& ratings, const SolverConfig& config,
                      const SnapshotSink& snapshot) {
  config.validate();
  const int n_blocks = config.resolved_blocks();
  const auto plan = parallel::SweepPlan::build(ratings, n_blocks);
  const std::int64_t sweep_columns =
      plan.t_m.total_columns() + plan.t_u.total_columns();

  SolveResult result;
  result.model = random_init(config.n_f, ratings.n_users(), ratings.n_items(), config.seed);

  Stopwatch watch;
  auto instrumented = [&](auto&& fn) {
    // Pauses the solve clock around measurement-only work when the strict
    // timing protocol is requested.
    if (config.paper_timing) watch.stop();
    fn();
    if (config.paper_timing) watch.start();
  };

  FlatVector x = flatten(result.model);
  double grad_norm = ncg::normalized_grad_norm(
      ncg::gradient(x, ratings, config.lambda, config.n_workers));
  result.trace.append({0, ncg::loss(x, ratings, config.lambda), grad_norm, 0.0, 0, 0, false});
  if (snapshot && config.snapshot_every > 0) snapshot(result.model, 0);

  bool converged = config.tol > 0.0 && grad_norm < config.tol;
  int k = 0;
  watch.start();
  while (!converged && k < config.max_iters) {
    auto users = parallel_half_sweep(parallel::HalfSweepKind::kUsers, result.model,
                                     ratings, config.lambda, plan, config.n_workers);
    result.model.user_data = std::move(users.columns);
    auto items = parallel_half_sweep(parallel::HalfSweepKind::kItems, result.model,
                                     ratings, config.lambda, plan, config.n_workers);
    result.model.item_data = std::move(items.columns);
    result.fallback_columns +=
        users.solve_stats.fallback_columns + items.solve_stats.fallback_columns;
    ++k;

    // Plain ALS does not need the gradient; it is computed here only for the
    // stopping test and the trace.
    instrumented([&] {
      x = flatten(result.model);
      grad_norm = ncg::normalized_grad_norm(
          ncg::gradient(x, ratings, config.lambda, config.n_workers));
    });
    converged = config.tol > 0.0 && grad_norm < config.tol;

    const bool record = k % config.trace_every == 0 || converged || k == config.max_iters;
    if (record) {
      double loss_value = 0.0;
      instrumented([&] { loss_value = ncg::loss(x, ratings, config.lambda); });
      result.trace.append({k, loss_value, grad_norm, watch.seconds(), 0, sweep_columns, false});
    }
    if (snapshot && config.snapshot_every > 0 && k % config.snapshot_every == 0)
      snapshot(result.model, k);
  }
  watch.stop();

  result.converged = converged;
  result.iterations = k;
  result.final_grad_norm = grad_norm;
  result.final_loss = ncg::loss(flatten(result.model), ratings, config.lambda);
  return result;
}

}  // namespace alsncg::als
