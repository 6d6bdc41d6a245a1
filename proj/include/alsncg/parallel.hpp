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

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "alsncg/als.hpp"
#include "alsncg/factors.hpp"
#include "alsncg/ratings.hpp"

namespace alsncg::parallel {

// Runs fn(0..n_tasks-1) across up to n_workers threads. Tasks are claimed
// from an atomic counter; callers must make tasks write to disjoint outputs.
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(int n_tasks, int n_workers, const std::function<void(int)>& fn);

// Modular assignment of factor columns to blocks: column j lives in block
// j mod n_blocks, so the columns of block b are {b, b+n_blocks, ...}.
struct Partitioning {
  int n_blocks = 1;
  int n_columns = 0;

  int block_of(int j) const { return j % n_blocks; }
  int block_size(int b) const {
    return (n_columns - b + n_blocks - 1) / n_blocks;
  }
};

Partitioning build_partitioning(int n_columns, int n_blocks);

// Which factor columns each source block must deliver to each destination
// block: column j appears in list(src, dst) iff at least one rating links j
// to a column owned by dst, and at most once per (src, dst) pair. Lists are
// sorted ascending. A function of the ratings and partitionings only.
struct RoutingTable {
  int n_source_blocks = 0;
  int n_dest_blocks = 0;
  std::vector<std::vector<int>> lists;  // [src * n_dest_blocks + dst]

  const std::vector<int>& list(int src, int dst) const {
    return lists[static_cast<std::size_t>(src) * n_dest_blocks + dst];
  }
  std::int64_t total_columns() const;
};

// Builds (T_u, T_m): T_u routes user factor columns to the item-update flow,
// T_m routes item factor columns to the user-update flow. Built once per
// dataset; iterations never change them.
std::pair<RoutingTable, RoutingTable> build_routing_tables(
    const RatingsMatrix& ratings, const Partitioning& users, const Partitioning& items);

// Transfer accounting for one half-sweep: how many factor columns the routing
// table ships between blocks (same-block deliveries included; cross-block
// totals broken out separately).
struct ShuffleStats {
  int n_source_blocks = 0;
  int n_dest_blocks = 0;
  std::vector<std::int64_t> sent;  // [src * n_dest_blocks + dst]
  std::int64_t columns_sent = 0;
  std::int64_t scalar_values_sent = 0;  // columns_sent * n_f

  std::int64_t sent_between(int src, int dst) const {
    return sent[static_cast<std::size_t>(src) * n_dest_blocks + dst];
  }
  std::int64_t cross_block_columns() const;
};

ShuffleStats stats_for(const RoutingTable& table, int n_f);

// Partitionings plus both routing tables for one dataset.
struct SweepPlan {
  Partitioning users;
  Partitioning items;
  RoutingTable t_u;
  RoutingTable t_m;

  static SweepPlan build(const RatingsMatrix& ratings, int n_blocks);
};

enum class HalfSweepKind { kUsers, kItems };

struct HalfSweepOutput {
  std::vector<double> columns;  // n_f x n_dest, column-major
  ShuffleStats stats;
  als::SolveStats solve_stats;
};

// Executes one half-sweep with the destination blocks as the unit of
// parallel work. Each task first "receives" its factor columns through the
// routing table (a shared-memory gather of column pointers; the stats count
// what a distributed run would put on the wire) and then solves its own
// columns, so a task can only read columns the table delivered. Results are
// identical to the sequential update_users/update_items for any worker
// count, bit for bit.
HalfSweepOutput parallel_half_sweep(HalfSweepKind kind, const FactorModel& model,
                                    const RatingsMatrix& ratings, double lambda,
                                    const SweepPlan& plan, int n_workers);

}  // namespace alsncg::parallel
