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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "alsncg/ranking.hpp"
#include "support.hpp"

using namespace alsncg;
using namespace alsncg::ranking;
using namespace testsupport;

namespace {

// Literal oracle: repeatedly swap adjacent entries of a copy of p2 until the
// next top item of p1 sits at its target rank, counting every swap.
std::int64_t adjacent_swap_count(const RankingVector& p1, const RankingVector& p2, int t) {
  std::vector<int> work = p2;
  std::int64_t swaps = 0;
  for (int r = 0; r < t; ++r) {
    int cur = static_cast<int>(std::find(work.begin(), work.end(), p1[r]) - work.begin());
    while (cur > r) {
      std::swap(work[cur], work[cur - 1]);
      --cur;
      ++swaps;
    }
  }
  return swaps;
}

double oracle_accuracy(const RankingVector& p1, const RankingVector& p2, int t) {
  const std::int64_t n = static_cast<std::int64_t>(p1.size());
  const std::int64_t s_max = t * (2 * n - t - 1) / 2;
  if (s_max == 0) return 1.0;
  return 1.0 - static_cast<double>(adjacent_swap_count(p1, p2, t)) / s_max;
}

}  // namespace

TEST_CASE("rank_items sorts by predicted score with id tie-break") {
  FactorModel m(1, 2, 3);
  m.user_data = {1.0, 0.0};
  m.item_data = {3.0, 1.0, 2.0};
  CHECK(rank_items(m, 0) == RankingVector{0, 2, 1});
  // A zero user scores every item 0; ties fall back to ascending ids.
  CHECK(rank_items(m, 1) == RankingVector{0, 1, 2});
  CHECK_THROWS_AS(rank_items(m, 2), std::out_of_range);
}

TEST_CASE("rank_items matches a naive re-sort oracle") {
  const FactorModel m = random_model(4, 6, 30, 77);
  for (int i = 0; i < m.n_u; ++i) {
    std::vector<double> score(static_cast<std::size_t>(m.n_m));
    for (int j = 0; j < m.n_m; ++j) {
      score[j] = 0.0;
      for (int k = 0; k < m.n_f; ++k) score[j] += m.user_col(i)[k] * m.item_col(j)[k];
    }
    RankingVector expect(static_cast<std::size_t>(m.n_m));
    std::iota(expect.begin(), expect.end(), 0);
    std::stable_sort(expect.begin(), expect.end(),
                     [&](int a, int b) { return score[a] > score[b]; });
    CHECK(rank_items(m, i) == expect);
  }
}

TEST_CASE("worked example: two rankings of six movies, t = 2") {
  // Movie labels 1..6 map to ids 0..5.
  const RankingVector p1{5, 2, 0, 1, 3, 4};
  const RankingVector p2{2, 3, 1, 4, 5, 0};
  CHECK(adjacent_swap_count(p1, p2, 2) == 4);
  CHECK(ranking_accuracy(p1, p2, 2) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("identical and reversed rankings") {
  RankingVector p(8);
  std::iota(p.begin(), p.end(), 0);
  for (int t = 1; t <= 8; ++t) CHECK(ranking_accuracy(p, p, t) == 1.0);

  RankingVector rev(p.rbegin(), p.rend());
  CHECK(ranking_accuracy(p, rev, 8) == 0.0);  // s = s_max = n(n-1)/2
}

TEST_CASE("invalid inputs are rejected") {
  const RankingVector p{0, 1, 2};
  CHECK_THROWS_AS(ranking_accuracy(p, {0, 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(ranking_accuracy(p, {0, 1, 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(ranking_accuracy(p, {0, 1, 3}, 1), std::invalid_argument);
  CHECK_THROWS_AS(ranking_accuracy(p, p, 0), std::invalid_argument);
  CHECK_THROWS_AS(ranking_accuracy(p, p, 4), std::invalid_argument);
}

TEST_CASE("exhaustive oracle equality for small permutations") {
  for (int n = 1; n <= 5; ++n) {
    RankingVector a(static_cast<std::size_t>(n));
    std::iota(a.begin(), a.end(), 0);
    std::vector<RankingVector> perms;
    RankingVector p = a;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    for (const auto& p1 : perms)
      for (const auto& p2 : perms)
        for (int t = 1; t <= n; ++t) {
          const double q = ranking_accuracy(p1, p2, t);
          CHECK(q == oracle_accuracy(p1, p2, t));
          CHECK(q >= 0.0);
          CHECK(q <= 1.0);
        }
  }
}

TEST_CASE("randomized oracle equality for larger permutations") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 6 + static_cast<int>(rng.uniform_below(30));
    RankingVector p1(static_cast<std::size_t>(n)), p2;
    std::iota(p1.begin(), p1.end(), 0);
    p2 = p1;
    // Fisher-Yates with the raw RNG.
    for (int k = n - 1; k > 0; --k) {
      std::swap(p1[k], p1[rng.uniform_below(static_cast<std::uint64_t>(k) + 1)]);
      std::swap(p2[k], p2[rng.uniform_below(static_cast<std::uint64_t>(k) + 1)]);
    }
    const int t = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    const double q = ranking_accuracy(p1, p2, t);
    CHECK(q == oracle_accuracy(p1, p2, t));
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("mean accuracy of a model against itself is 1") {
  const FactorModel m = random_model(3, 5, 12, 13);
  CHECK(mean_ranking_accuracy(m, m, 4) == 1.0);
}

TEST_CASE("mean accuracy reproduces the worked example through models") {
  // One user; item scores arranged so the reference ranks items as p1 and
  // the candidate ranks them as p2 from the worked example.
  const RankingVector p1{5, 2, 0, 1, 3, 4};
  const RankingVector p2{2, 3, 1, 4, 5, 0};
  FactorModel final_model(1, 1, 6), at_k(1, 1, 6);
  final_model.user_data = {1.0};
  at_k.user_data = {1.0};
  for (int rank = 0; rank < 6; ++rank) {
    final_model.item_data[p1[rank]] = 6.0 - rank;
    at_k.item_data[p2[rank]] = 6.0 - rank;
  }
  CHECK(mean_ranking_accuracy(at_k, final_model, 2) ==
        doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("mean accuracy equals the per-user loop oracle") {
  const FactorModel at_k = random_model(3, 8, 15, 21);
  const FactorModel final_model = random_model(3, 8, 15, 22);
  const int t = 5;
  double expect = 0.0;
  for (int i = 0; i < 8; ++i)
    expect += ranking_accuracy(rank_items(final_model, i), rank_items(at_k, i), t);
  expect /= 8.0;
  CHECK(mean_ranking_accuracy(at_k, final_model, t) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(mean_ranking_accuracy(at_k, final_model, t, 4) ==
        mean_ranking_accuracy(at_k, final_model, t, 1));
}
