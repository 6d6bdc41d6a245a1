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

#include "alsncg/factors.hpp"

namespace alsncg::ranking {

// Item ids ordered by descending predicted rating u_i'm_j; predicted-score
// ties broken by ascending item id so rankings are deterministic.
using RankingVector = std::vector<int>;

/// Full item ranking for one user. Throws std::out_of_range on a bad index.
RankingVector rank_items(const FactorModel& model, int user);

// Normalized top-t Kendall-tau ranking accuracy. Walks p1's top t items in
// rank order, counting the adjacent swaps needed to pull each one to its
// target position in a working copy of p2 (already placed items stay fixed).
// With s the total swap count and s_max = (t/2)(2n - t - 1) the worst case,
// returns q = 1 - s/s_max in [0, 1]. Throws std::invalid_argument unless p1
// and p2 are permutations of the same [0, n) and 1 <= t <= n.
double ranking_accuracy(const RankingVector& p1, const RankingVector& p2, int t);

// Mean over all users of the accuracy of model_at_k's rankings, scored
// against the converged model's rankings as the reference (p1).
double mean_ranking_accuracy(const FactorModel& model_at_k, const FactorModel& model_final,
                             int t, int n_workers = 1);

}  // namespace alsncg::ranking
