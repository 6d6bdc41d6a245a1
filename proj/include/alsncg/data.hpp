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
#include <string>
#include <vector>

#include "alsncg/ratings.hpp"

namespace alsncg::data {

struct IngestResult {
  RatingsMatrix matrix;
  // Dense index -> id as it appeared in the file, in order of first
  // appearance.
  std::vector<std::int64_t> user_ids;
  std::vector<std::int64_t> item_ids;
};

// Reads `userId,movieId,rating[,timestamp]` rows (optional single header
// line, \n or \r\n endings) and re-indexes the positive integer ids densely.
// Throws DataError on malformed rows (with the line number), duplicate
// ratings, or an empty file.
IngestResult ingest_csv(const std::string& path, bool has_header,
                        bool single_precision = false);

struct SubsetResult {
  RatingsMatrix matrix;
  // Dense subset index -> index in the parent matrix, ascending.
  std::vector<int> user_ids;
  std::vector<int> item_ids;
};

// Median-window subset: users are sorted descending by rating count (ties by
// ascending id); with c = floor(total/2) the users at sorted positions
// [c - floor(n_u/2), c + ceil(n_u/2) - 1] are kept. Items are then ranked by
// their rating counts over the chosen users only and the same window rule is
// applied. Users or items left without ratings keep their (empty) rows and
// columns. Throws DataError when a window exceeds the sorted range.
SubsetResult build_subset(const RatingsMatrix& full, int n_u, int n_m);

// Empirical sampling model of a ratings matrix: the distribution of
// ratings-per-user counts, per-item selection probabilities proportional to
// each item's rating count, and the distribution of observed rating values.
struct EmpiricalDistributions {
  std::vector<int> user_count_support;   // ascending distinct n_ui values
  std::vector<double> user_count_prob;   // sums to 1
  std::vector<double> user_count_cum;
  std::vector<double> item_prob;         // size n_items, sums to 1
  std::vector<double> item_cum;
  std::vector<double> rating_support;    // ascending distinct rating values
  std::vector<double> rating_prob;       // sums to 1
  std::vector<double> rating_cum;

  int n_items() const { return static_cast<int>(item_prob.size()); }
};

/// Throws DataError on an empty matrix.
EmpiricalDistributions fit_distributions(const RatingsMatrix& ratings);

// Draws a synthetic matrix that matches the source statistics: each of the
// n_u users gets a rating count sampled from the count distribution, that
// many distinct items sampled by popularity (duplicates redrawn, capped at
// 100x the count), and values sampled from the rating distribution.
// Deterministic given the seed. n_m must equal the source item count.
RatingsMatrix sample_synthetic(const EmpiricalDistributions& dist, int n_u, int n_m,
                               std::uint64_t seed);

// CSV output in the ingestion format (header line included, dense ids
// written 1-based so the files re-ingest cleanly).
void write_ratings_csv(const std::string& path, const RatingsMatrix& ratings);
/// Two-column `newId,originalId` map; newId matches the written CSV ids.
void write_id_map_csv(const std::string& path, const std::vector<std::int64_t>& original_ids);

}  // namespace alsncg::data
