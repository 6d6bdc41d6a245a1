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

#include "alsncg/data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include "alsncg/rng.hpp"

namespace alsncg::data {

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_i64(std::string_view field, std::int64_t& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void malformed(const std::string& path, std::int64_t line_no,
                            const std::string& why) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

IngestResult ingest_csv(const std::string& path, bool has_header, bool single_precision) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);

  IngestResult result;
  std::unordered_map<std::int64_t, int> user_index, item_index;
  std::vector<Rating> triples;

  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && has_header) continue;
    if (line.empty()) continue;

    std::string_view view(line);
    std::array<std::string_view, 4> field;
    int n_fields = 0;
    while (n_fields < 4) {
      const std::size_t comma = view.find(',');
      field[n_fields++] = view.substr(0, comma);
      if (comma == std::string_view::npos) {
        view = {};
        break;
      }
      view.remove_prefix(comma + 1);
      if (n_fields == 4) break;
    }
    if (!view.empty() || n_fields < 3)
      malformed(path, line_no, "expected userId,movieId,rating[,timestamp]");

    std::int64_t user_id = 0, item_id = 0;
    double value = 0.0;
    if (!parse_i64(field[0], user_id) || user_id <= 0)
      malformed(path, line_no, "bad user id '" + std::string(field[0]) + "'");
    if (!parse_i64(field[1], item_id) || item_id <= 0)
      malformed(path, line_no, "bad movie id '" + std::string(field[1]) + "'");
    if (!parse_double(field[2], value))
      malformed(path, line_no, "bad rating '" + std::string(field[2]) + "'");
    // field[3], the timestamp, is ignored.

    auto [uit, u_new] = user_index.try_emplace(user_id, static_cast<int>(result.user_ids.size()));
    if (u_new) result.user_ids.push_back(user_id);
    auto [iit, i_new] = item_index.try_emplace(item_id, static_cast<int>(result.item_ids.size()));
    if (i_new) result.item_ids.push_back(item_id);
    triples.push_back({uit->second, iit->second, value});
  }
  if (triples.empty()) throw DataError("empty ratings file: " + path);

  try {
    result.matrix = RatingsMatrix::from_triples(static_cast<int>(result.user_ids.size()),
                                                static_cast<int>(result.item_ids.size()),
                                                std::move(triples), single_precision);
  } catch (const DuplicateRatingError& dup) {
    throw DataError(path + ": duplicate rating for user " +
                    std::to_string(result.user_ids[dup.user]) + ", movie " +
                    std::to_string(result.item_ids[dup.item]));
  }
  return result;
}

namespace {

// Positions [c - floor(n/2), c + ceil(n/2) - 1] around the median index of a
// descending count-sorted id list.
std::vector<int> median_window(const std::vector<std::int64_t>& counts, int n_selected,
                               const char* what) {
  const int total = static_cast<int>(counts.size());
  if (n_selected < 1 || n_selected > total)
    throw DataError(std::string("subset ") + what + " count out of range");
  std::vector<int> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return a < b;
  });
  const int c = total / 2;
  const int lo = c - n_selected / 2;
  const int hi = c + (n_selected + 1) / 2 - 1;
  if (lo < 0 || hi >= total)
    throw DataError(std::string("subset window for ") + what +
                    " exceeds the sorted range (requested " + std::to_string(n_selected) +
                    " of " + std::to_string(total) + ")");
  std::vector<int> chosen(order.begin() + lo, order.begin() + hi + 1);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

SubsetResult build_subset(const RatingsMatrix& full, int n_u, int n_m) {
  std::vector<std::int64_t> user_counts(static_cast<std::size_t>(full.n_users()));
  for (int i = 0; i < full.n_users(); ++i) user_counts[i] = full.user_count(i);
  SubsetResult result;
  result.user_ids = median_window(user_counts, n_u, "user");

  std::vector<int> user_new_index(static_cast<std::size_t>(full.n_users()), -1);
  for (int i = 0; i < n_u; ++i) user_new_index[result.user_ids[i]] = i;

  // Item counts are taken over the chosen users only.
  std::vector<std::int64_t> item_counts(static_cast<std::size_t>(full.n_items()), 0);
  for (int u : result.user_ids)
    for (int j : full.user_items(u)) ++item_counts[j];
  result.item_ids = median_window(item_counts, n_m, "item");

  std::vector<int> item_new_index(static_cast<std::size_t>(full.n_items()), -1);
  for (int j = 0; j < n_m; ++j) item_new_index[result.item_ids[j]] = j;

  std::vector<Rating> triples;
  for (int u : result.user_ids) {
    const auto items = full.user_items(u);
    const auto values = full.user_values(u);
    for (std::size_t t = 0; t < items.size(); ++t) {
      const int nj = item_new_index[items[t]];
      if (nj >= 0) triples.push_back({user_new_index[u], nj, values[t]});
    }
  }
  result.matrix = RatingsMatrix::from_triples(n_u, n_m, std::move(triples),
                                              full.single_precision_storage());
  return result;
}

EmpiricalDistributions fit_distributions(const RatingsMatrix& ratings) {
  if (ratings.nnz() == 0) throw DataError("fit_distributions: empty ratings matrix");
  EmpiricalDistributions dist;

  std::map<int, std::int64_t> count_freq;
  for (int i = 0; i < ratings.n_users(); ++i) ++count_freq[ratings.user_count(i)];
  const double inv_users = 1.0 / ratings.n_users();
  for (const auto& [count, freq] : count_freq) {
    dist.user_count_support.push_back(count);
    dist.user_count_prob.push_back(freq * inv_users);
  }

  const double inv_nnz = 1.0 / static_cast<double>(ratings.nnz());
  dist.item_prob.resize(static_cast<std::size_t>(ratings.n_items()));
  for (int j = 0; j < ratings.n_items(); ++j)
    dist.item_prob[j] = ratings.item_count(j) * inv_nnz;

  std::map<double, std::int64_t> value_freq;
  for (int i = 0; i < ratings.n_users(); ++i)
    for (double v : ratings.user_values(i)) ++value_freq[v];
  for (const auto& [value, freq] : value_freq) {
    dist.rating_support.push_back(value);
    dist.rating_prob.push_back(freq * inv_nnz);
  }

  auto cumulate = [](const std::vector<double>& prob) {
    std::vector<double> cum(prob.size());
    double run = 0.0;
    for (std::size_t k = 0; k < prob.size(); ++k) {
      run += prob[k];
      cum[k] = run;
    }
    return cum;
  };
  dist.user_count_cum = cumulate(dist.user_count_prob);
  dist.item_cum = cumulate(dist.item_prob);
  dist.rating_cum = cumulate(dist.rating_prob);
  return dist;
}

RatingsMatrix sample_synthetic(const EmpiricalDistributions& dist, int n_u, int n_m,
                               std::uint64_t seed) {
  if (n_m != dist.n_items())
    throw std::invalid_argument(
        "sample_synthetic: n_m must equal the source item count (the item "
        "distribution is defined over a fixed item set)");
  if (n_u < 0) throw std::invalid_argument("sample_synthetic: negative user count");

  Rng rng(seed);
  std::vector<Rating> triples;
  std::vector<int> stamp(static_cast<std::size_t>(n_m), -1);  // per-user dedup marks

  for (int i = 0; i < n_u; ++i) {
    int count = 0;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      count = dist.user_count_support[sample_cumulative(dist.user_count_cum, rng.uniform())];
      if (count <= n_m) {
        ok = true;
        break;
      }
    }
    if (!ok)
      throw DataError("sample_synthetic: sampled rating count exceeds the item set for user " +
                      std::to_string(i));
    if (count == 0) continue;

    const std::int64_t cap = 100LL * count;
    std::int64_t attempts = 0;
    int drawn = 0;
    while (drawn < count) {
      if (attempts++ >= cap)
        throw DataError("sample_synthetic: duplicate-rejection cap reached for user " +
                        std::to_string(i));
      const int j = sample_cumulative(dist.item_cum, rng.uniform());
      if (stamp[j] == i) continue;
      stamp[j] = i;
      ++drawn;
      const double value =
          dist.rating_support[sample_cumulative(dist.rating_cum, rng.uniform())];
      triples.push_back({i, j, value});
    }
  }
  return RatingsMatrix::from_triples(n_u, n_m, std::move(triples));
}

void write_ratings_csv(const std::string& path, const RatingsMatrix& ratings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "userId,movieId,rating\n";
  for (int i = 0; i < ratings.n_users(); ++i) {
    const auto items = ratings.user_items(i);
    const auto values = ratings.user_values(i);
    for (std::size_t t = 0; t < items.size(); ++t)
      out << i + 1 << ',' << items[t] + 1 << ',' << format_value(values[t]) << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

void write_id_map_csv(const std::string& path, const std::vector<std::int64_t>& original_ids) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "newId,originalId\n";
  for (std::size_t k = 0; k < original_ids.size(); ++k)
    out << k + 1 << ',' << original_ids[k] << '\n';
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace alsncg::data
