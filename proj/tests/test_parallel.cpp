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

#include <cstdio>
#include <filesystem>
#include <set>

#include "alsncg/als.hpp"
#include "alsncg/parallel.hpp"
#include "alsncg/snapshot.hpp"
#include "support.hpp"

using namespace alsncg;
using namespace alsncg::parallel;
using namespace testsupport;

namespace {

// Brute-force oracle: enumerate every rating and collect (src, dst) column
// sets directly.
std::pair<RoutingTable, RoutingTable> brute_force_tables(const RatingsMatrix& r,
                                                         const Partitioning& users,
                                                         const Partitioning& items) {
  std::vector<std::set<int>> tu(static_cast<std::size_t>(users.n_blocks) * items.n_blocks);
  std::vector<std::set<int>> tm(static_cast<std::size_t>(items.n_blocks) * users.n_blocks);
  for (const Rating& t : r.to_triples()) {
    const int ub = t.user % users.n_blocks;
    const int ib = t.item % items.n_blocks;
    tu[static_cast<std::size_t>(ub) * items.n_blocks + ib].insert(t.user);
    tm[static_cast<std::size_t>(ib) * users.n_blocks + ub].insert(t.item);
  }
  RoutingTable t_u{users.n_blocks, items.n_blocks, {}};
  for (const auto& s : tu) t_u.lists.emplace_back(s.begin(), s.end());
  RoutingTable t_m{items.n_blocks, users.n_blocks, {}};
  for (const auto& s : tm) t_m.lists.emplace_back(s.begin(), s.end());
  return {t_u, t_m};
}

RatingsMatrix diagonal_ratings(int n) {
  std::vector<Rating> triples;
  for (int i = 0; i < n; ++i) triples.push_back({i, i, 1.0 + i});
  return RatingsMatrix::from_triples(n, n, std::move(triples));
}

}  // namespace

TEST_CASE("modular partitioning") {
  const Partitioning p = build_partitioning(10, 4);
  CHECK(p.block_of(5) == 1);
  CHECK(build_partitioning(10, 1).block_of(7) == 0);

  const Partitioning q = build_partitioning(10, 3);
  CHECK(q.block_size(0) == 4);
  CHECK(q.block_size(1) == 3);
  CHECK(q.block_size(2) == 3);

  CHECK_THROWS_AS(build_partitioning(10, 0), std::invalid_argument);
}

TEST_CASE("diagonal ratings route everything block-locally") {
  const int n = 12, n_b = 4;  // n_b divides n
  const RatingsMatrix r = diagonal_ratings(n);
  const auto part = build_partitioning(n, n_b);
  const auto [t_u, t_m] = build_routing_tables(r, part, part);
  for (int src = 0; src < n_b; ++src)
    for (int dst = 0; dst < n_b; ++dst) {
      if (src == dst) {
        CHECK(static_cast<int>(t_m.list(src, dst).size()) == n / n_b);
      } else {
        CHECK(t_m.list(src, dst).empty());
        CHECK(t_u.list(src, dst).empty());
      }
    }
}

TEST_CASE("a column rated everywhere is sent once per destination") {
  // One item rated by every user: its id shows up exactly once in each
  // destination list of T_m.
  const int n_u = 9, n_b = 3;
  std::vector<Rating> triples;
  for (int i = 0; i < n_u; ++i) triples.push_back({i, 0, 2.0});
  const RatingsMatrix r = RatingsMatrix::from_triples(n_u, 1, std::move(triples));
  const auto [t_u, t_m] =
      build_routing_tables(r, build_partitioning(n_u, n_b), build_partitioning(1, n_b));
  for (int dst = 0; dst < n_b; ++dst) {
    int appearances = 0;
    for (int src = 0; src < n_b; ++src)
      for (int j : t_m.list(src, dst)) appearances += j == 0 ? 1 : 0;
    CHECK(appearances == 1);
  }
}

TEST_CASE("routing tables match the brute-force oracle and rebuild identically") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RatingsMatrix r = random_ratings(25, 18, 0.15, 1000 + seed);
    const auto pu = build_partitioning(r.n_users(), 4);
    const auto pm = build_partitioning(r.n_items(), 3);
    const auto [t_u, t_m] = build_routing_tables(r, pu, pm);
    const auto [o_u, o_m] = brute_force_tables(r, pu, pm);
    CHECK(t_u.lists == o_u.lists);
    CHECK(t_m.lists == o_m.lists);

    const auto [r_u, r_m] = build_routing_tables(r, pu, pm);
    CHECK(r_u.lists == t_u.lists);
    CHECK(r_m.lists == t_m.lists);
  }
}

TEST_CASE("dedup bounds on the shuffle volume") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const RatingsMatrix r = random_ratings(30, 20, 0.25, 2000 + seed);
    const int n_b = 4;
    const auto plan = SweepPlan::build(r, n_b);
    const auto stats = stats_for(plan.t_m, 5);
    CHECK(stats.columns_sent <= r.nnz());
    CHECK(stats.columns_sent <= static_cast<std::int64_t>(n_b) * r.n_items());
    CHECK(stats.scalar_values_sent == stats.columns_sent * 5);

    // Strictly fewer columns than ratings whenever some item is rated twice
    // within one destination block.
    bool duplicate_in_block = false;
    for (int j = 0; j < r.n_items() && !duplicate_in_block; ++j) {
      std::vector<int> per_block(n_b, 0);
      for (int i : r.item_users(j))
        if (++per_block[plan.users.block_of(i)] > 1) duplicate_in_block = true;
    }
    if (duplicate_in_block) CHECK(stats.columns_sent < r.nnz());

    // Totals equal the per-pair breakdown.
    std::int64_t total = 0;
    for (int s = 0; s < stats.n_source_blocks; ++s)
      for (int d = 0; d < stats.n_dest_blocks; ++d) total += stats.sent_between(s, d);
    CHECK(total == stats.columns_sent);
  }
}

TEST_CASE("parallel half-sweeps are bitwise equal to the sequential solver") {
  const RatingsMatrix r = random_ratings(40, 24, 0.2, 3000);
  const FactorModel model = random_model(4, 40, 24, 3001);
  const double lambda = 0.1;
  const auto plan = SweepPlan::build(r, 8);

  const auto seq_users = als::update_users(model, r, lambda);
  const auto seq_items = als::update_items(model, r, lambda);
  for (int workers : {1, 2, 4, 8}) {
    const auto users =
        parallel_half_sweep(HalfSweepKind::kUsers, model, r, lambda, plan, workers);
    CHECK(users.columns == seq_users);
    const auto items =
        parallel_half_sweep(HalfSweepKind::kItems, model, r, lambda, plan, workers);
    CHECK(items.columns == seq_items);
  }
}

TEST_CASE("diagonal ratings ship no cross-block columns") {
  const RatingsMatrix r = diagonal_ratings(12);
  const FactorModel model = random_model(3, 12, 12, 5);
  const auto plan = SweepPlan::build(r, 4);
  const auto out = parallel_half_sweep(HalfSweepKind::kUsers, model, r, 0.1, plan, 2);
  CHECK(out.stats.cross_block_columns() == 0);
  CHECK(out.stats.columns_sent == 12);
}

TEST_CASE("full solves are deterministic across worker counts") {
  const RatingsMatrix r = movielens_like(36, 14, 0.3, 4000);
  SolverConfig config;
  config.lambda = 0.1;
  config.n_f = 3;
  config.tol = 0.0;
  config.max_iters = 8;
  config.seed = 6;
  config.n_blocks = 4;  // fixed so only the worker count varies

  config.n_workers = 1;
  const SolveResult one = als::als_solve(r, config);
  config.n_workers = 2;
  const SolveResult two = als::als_solve(r, config);
  CHECK(one.model.user_data == two.model.user_data);
  CHECK(one.model.item_data == two.model.item_data);
  REQUIRE(one.trace.size() == two.trace.size());
  for (std::size_t k = 0; k < one.trace.size(); ++k) {
    CHECK(one.trace[k].loss == two.trace[k].loss);
    CHECK(one.trace[k].grad_norm == two.trace[k].grad_norm);
    CHECK(one.trace[k].shuffled_columns == two.trace[k].shuffled_columns);
  }
}

TEST_CASE("model snapshots round-trip") {
  const FactorModel model = random_model(4, 11, 7, 42);
  const std::string path =
      (std::filesystem::temp_directory_path() / "alsncg_snapshot_test.bin").string();
  save_model(path, model, 30, 1234567);
  const LoadedModel loaded = load_model(path);
  CHECK(loaded.meta.n_f == 4);
  CHECK(loaded.meta.n_u == 11);
  CHECK(loaded.meta.n_m == 7);
  CHECK(loaded.meta.iter == 30);
  CHECK(loaded.meta.seed == 1234567);
  CHECK(loaded.model.user_data == model.user_data);
  CHECK(loaded.model.item_data == model.item_data);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(load_model("/nonexistent/alsncg.bin"), DataError);
}
