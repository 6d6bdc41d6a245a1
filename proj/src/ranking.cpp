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

#include "alsncg/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "alsncg/parallel.hpp"

namespace alsncg::ranking {

namespace {

void check_permutation(const RankingVector& p, int n) {
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("ranking_accuracy: size mismatch");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("ranking_accuracy: not a permutation");
    seen[v] = 1;
  }
}

}  // namespace

RankingVector rank_items(const FactorModel& model, int user) {
  if (user < 0 || user >= model.n_u) throw std::out_of_range("rank_items: user index");
  const double* u = model.user_col(user);
  std::vector<double> score(static_cast<std::size_t>(model.n_m));
  for (int j = 0; j < model.n_m; ++j) {
    const double* m = model.item_col(j);
    double s = 0.0;
    for (int k = 0; k < model.n_f; ++k) s += u[k] * m[k];
    score[j] = s;
  }
  RankingVector order(static_cast<std::size_t>(model.n_m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  return order;
}

double ranking_accuracy(const RankingVector& p1, const RankingVector& p2, int t) {
  const int n = static_cast<int>(p1.size());
  check_permutation(p1, n);
  check_permutation(p2, n);
  if (t < 1 || t > n) throw std::invalid_argument("ranking_accuracy: t out of range");

  std::vector<int> working = p2;
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) pos[working[r]] = r;

  std::int64_t swaps = 0;
  for (int r = 0; r < t; ++r) {
    const int item = p1[r];
    const int cur = pos[item];
    // Positions below r already hold placed items, so cur >= r; moving the
    // item to rank r costs cur - r adjacent swaps.
    swaps += cur - r;
    for (int k = cur; k > r; --k) {
      working[k] = working[k - 1];
      pos[working[k]] = k;
    }
    working[r] = item;
    pos[item] = r;
  }

  const std::int64_t s_max =
      static_cast<std::int64_t>(t) * (2 * static_cast<std::int64_t>(n) - t - 1) / 2;
  if (s_max == 0) return 1.0;  // n == 1: the rankings are trivially identical
  return 1.0 - static_cast<double>(swaps) / static_cast<double>(s_max);
}

double mean_ranking_accuracy(const FactorModel& model_at_k, const FactorModel& model_final,
                             int t, int n_workers) {
  if (model_at_k.n_f != model_final.n_f || model_at_k.n_u != model_final.n_u ||
      model_at_k.n_m != model_final.n_m)
    throw std::invalid_argument("mean_ranking_accuracy: model shape mismatch");
  if (model_at_k.n_u == 0) throw std::invalid_argument("mean_ranking_accuracy: no users");

  std::vector<double> q(static_cast<std::size_t>(model_at_k.n_u));
  const int chunks = std::max(1, std::min(model_at_k.n_u, n_workers * 4));
  parallel::parallel_for(chunks, n_workers, [&](int c) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(c) * model_at_k.n_u / chunks);
    const int hi = static_cast<int>(static_cast<std::int64_t>(c + 1) * model_at_k.n_u / chunks);
    for (int i = lo; i < hi; ++i)
      q[i] = ranking_accuracy(rank_items(model_final, i), rank_items(model_at_k, i), t);
  });

  double sum = 0.0;
  for (double v : q) sum += v;
  return sum / static_cast<double>(model_at_k.n_u);
}

}  // namespace alsncg::ranking
