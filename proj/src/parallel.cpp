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

#include "alsncg/parallel.hpp"

#include <atomic>
#include <cassert>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace alsncg::parallel {

void parallel_for(int n_tasks, int n_workers, const std::function<void(int)>& fn) {
  if (n_tasks <= 0) return;
  if (n_workers > n_tasks) n_workers = n_tasks;
  if (n_workers <= 1) {
    for (int t = 0; t < n_tasks; ++t) fn(t);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= n_tasks) break;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n_workers) - 1);
  for (int w = 1; w < n_workers; ++w) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

Partitioning build_partitioning(int n_columns, int n_blocks) {
  if (n_blocks < 1) throw std::invalid_argument("build_partitioning: n_blocks must be >= 1");
  if (n_columns < 0) throw std::invalid_argument("build_partitioning: negative column count");
  return Partitioning{n_blocks, n_columns};
}

std::int64_t RoutingTable::total_columns() const {
  std::int64_t total = 0;
  for (const auto& l : lists) total += static_cast<std::int64_t>(l.size());
  return total;
}

std::pair<RoutingTable, RoutingTable> build_routing_tables(const RatingsMatrix& ratings,
                                                           const Partitioning& users,
                                                           const Partitioning& items) {
  if (users.n_columns != ratings.n_users() || items.n_columns != ratings.n_items())
    throw std::invalid_argument("build_routing_tables: partitioning does not cover the ratings");

  RoutingTable t_u;  // user columns -> item-update destinations
  t_u.n_source_blocks = users.n_blocks;
  t_u.n_dest_blocks = items.n_blocks;
  t_u.lists.resize(static_cast<std::size_t>(users.n_blocks) * items.n_blocks);

  RoutingTable t_m;  // item columns -> user-update destinations
  t_m.n_source_blocks = items.n_blocks;
  t_m.n_dest_blocks = users.n_blocks;
  t_m.lists.resize(static_cast<std::size_t>(items.n_blocks) * users.n_blocks);

  // Ascending column scans keep every (src, dst) list sorted; the per-column
  // mark array dedups destinations.
  std::vector<char> dest_seen(static_cast<std::size_t>(std::max(users.n_blocks, items.n_blocks)));
  for (int i = 0; i < ratings.n_users(); ++i) {
    std::fill(dest_seen.begin(), dest_seen.begin() + items.n_blocks, 0);
    const int src = users.block_of(i);
    for (int j : ratings.user_items(i)) {
      const int dst = items.block_of(j);
      if (!dest_seen[dst]) {
        dest_seen[dst] = 1;
        t_u.lists[static_cast<std::size_t>(src) * items.n_blocks + dst].push_back(i);
      }
    }
  }
  for (int j = 0; j < ratings.n_items(); ++j) {
    std::fill(dest_seen.begin(), dest_seen.begin() + users.n_blocks, 0);
    const int src = items.block_of(j);
    for (int i : ratings.item_users(j)) {
      const int dst = users.block_of(i);
      if (!dest_seen[dst]) {
        dest_seen[dst] = 1;
        t_m.lists[static_cast<std::size_t>(src) * users.n_blocks + dst].push_back(j);
      }
    }
  }
  return {std::move(t_u), std::move(t_m)};
}

std::int64_t ShuffleStats::cross_block_columns() const {
  std::int64_t total = 0;
  for (int s = 0; s < n_source_blocks; ++s)
    for (int d = 0; d < n_dest_blocks; ++d)
      if (s != d) total += sent_between(s, d);
  return total;
}

ShuffleStats stats_for(const RoutingTable& table, int n_f) {
  ShuffleStats stats;
  stats.n_source_blocks = table.n_source_blocks;
  stats.n_dest_blocks = table.n_dest_blocks;
  stats.sent.resize(table.lists.size());
  for (std::size_t k = 0; k < table.lists.size(); ++k) {
    stats.sent[k] = static_cast<std::int64_t>(table.lists[k].size());
    stats.columns_sent += stats.sent[k];
  }
  stats.scalar_values_sent = stats.columns_sent * n_f;
  return stats;
}

SweepPlan SweepPlan::build(const RatingsMatrix& ratings, int n_blocks) {
  SweepPlan plan;
  plan.users = build_partitioning(ratings.n_users(), n_blocks);
  plan.items = build_partitioning(ratings.n_items(), n_blocks);
  auto [t_u, t_m] = build_routing_tables(ratings, plan.users, plan.items);
  plan.t_u = std::move(t_u);
  plan.t_m = std::move(t_m);
  return plan;
}

HalfSweepOutput parallel_half_sweep(HalfSweepKind kind, const FactorModel& model,
                                    const RatingsMatrix& ratings, double lambda,
                                    const SweepPlan& plan, int n_workers) {
  const bool users = kind == HalfSweepKind::kUsers;
  const int n_f = model.n_f;
  const int n_dest = users ? ratings.n_users() : ratings.n_items();
  const int n_src = users ? ratings.n_items() : ratings.n_users();
  const Partitioning& dest_part = users ? plan.users : plan.items;
  const RoutingTable& table = users ? plan.t_m : plan.t_u;
  const int n_blocks = dest_part.n_blocks;

  HalfSweepOutput out;
  out.columns.assign(static_cast<std::size_t>(n_f) * n_dest, 0.0);
  out.stats = stats_for(table, n_f);
  std::vector<int> fallback_per_block(static_cast<std::size_t>(n_blocks), 0);

  parallel_for(n_blocks, n_workers, [&](int b) {
    // Receive: the routing table says exactly which source columns this
    // destination block gets; gather their addresses. Columns the table did
    // not deliver stay null and must never be read.
    std::vector<const double*> cols(static_cast<std::size_t>(n_src), nullptr);
    for (int src = 0; src < table.n_source_blocks; ++src) {
      for (int j : table.list(src, b))
        cols[j] = users ? model.item_col(j) : model.user_col(j);
    }

    als::SolveStats stats;
    for (int c = b; c < n_dest; c += n_blocks) {
      double* target = out.columns.data() + static_cast<std::size_t>(c) * n_f;
      const auto idx = users ? ratings.user_items(c) : ratings.item_users(c);
      const auto vals = users ? ratings.user_values(c) : ratings.item_values(c);
      if (idx.empty()) continue;  // column stays zero
      assert(cols[idx.front()] != nullptr);
      als::solve_normal_column(idx.data(), vals.data(), static_cast<int>(idx.size()),
                               cols.data(), n_f, lambda, target, stats);
    }
    fallback_per_block[b] = stats.fallback_columns;
  });

  for (int fb : fallback_per_block) out.solve_stats.fallback_columns += fb;
  return out;
}

}  // namespace alsncg::parallel
