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

#include "alsncg/ratings.hpp"

#include <algorithm>
#include <cmath>

namespace alsncg {

DuplicateRatingError::DuplicateRatingError(int user_in, int item_in)
    : DataError("duplicate rating for user " + std::to_string(user_in) +
                ", item " + std::to_string(item_in)),
      user(user_in),
      item(item_in) {}

RatingsMatrix RatingsMatrix::from_triples(int n_users, int n_items,
                                          std::vector<Rating> triples,
                                          bool single_precision_storage) {
  if (n_users < 0 || n_items < 0)
    throw DataError("negative matrix dimensions");
  for (const Rating& t : triples) {
    if (t.user < 0 || t.user >= n_users || t.item < 0 || t.item >= n_items)
      throw DataError("rating index out of range: user " +
                      std::to_string(t.user) + ", item " +
                      std::to_string(t.item));
    if (!std::isfinite(t.value))
      throw DataError("non-finite rating value for user " +
                      std::to_string(t.user) + ", item " +
                      std::to_string(t.item));
  }
  std::sort(triples.begin(), triples.end(), [](const Rating& a, const Rating& b) {
    if (a.user != b.user) return a.user < b.user;
    return a.item < b.item;
  });
  for (std::size_t t = 1; t < triples.size(); ++t) {
    if (triples[t].user == triples[t - 1].user &&
        triples[t].item == triples[t - 1].item)
      throw DuplicateRatingError(triples[t].user, triples[t].item);
  }

  RatingsMatrix r;
  r.n_u_ = n_users;
  r.n_m_ = n_items;
  r.nnz_ = static_cast<std::int64_t>(triples.size());
  r.single_ = single_precision_storage;

  r.uptr_.assign(static_cast<std::size_t>(n_users) + 1, 0);
  r.iptr_.assign(static_cast<std::size_t>(n_items) + 1, 0);
  for (const Rating& t : triples) {
    ++r.uptr_[static_cast<std::size_t>(t.user) + 1];
    ++r.iptr_[static_cast<std::size_t>(t.item) + 1];
  }
  for (int i = 0; i < n_users; ++i) r.uptr_[i + 1] += r.uptr_[i];
  for (int j = 0; j < n_items; ++j) r.iptr_[j + 1] += r.iptr_[j];

  r.uidx_.resize(triples.size());
  r.uval_.resize(triples.size());
  r.iidx_.resize(triples.size());
  r.ival_.resize(triples.size());

  // Triples are user-major and item-sorted within the user, so the user view
  // is a straight copy and the stable counting pass below leaves the item
  // view sorted by user.
  std::vector<std::int64_t> icur(r.iptr_.begin(), r.iptr_.end() - 1);
  std::int64_t pos = 0;
  for (const Rating& t : triples) {
    double v = t.value;
    if (single_precision_storage) v = static_cast<double>(static_cast<float>(v));
    r.uidx_[pos] = t.item;
    r.uval_[pos] = v;
    const std::int64_t ip = icur[t.item]++;
    r.iidx_[ip] = t.user;
    r.ival_[ip] = v;
    ++pos;
  }
  return r;
}

std::vector<Rating> RatingsMatrix::to_triples() const {
  std::vector<Rating> out;
  out.reserve(static_cast<std::size_t>(nnz_));
  for (int i = 0; i < n_u_; ++i) {
    const auto items = user_items(i);
    const auto values = user_values(i);
    for (std::size_t t = 0; t < items.size(); ++t)
      out.push_back({i, items[t], values[t]});
  }
  return out;
}

void RatingsMatrix::check_consistent() const {
  auto fail = [](const std::string& what) { throw std::logic_error("RatingsMatrix: " + what); };
  if (uptr_.size() != static_cast<std::size_t>(n_u_) + 1) fail("user pointer size");
  if (iptr_.size() != static_cast<std::size_t>(n_m_) + 1) fail("item pointer size");
  if (uptr_.back() != nnz_ || iptr_.back() != nnz_) fail("nnz mismatch");
  std::int64_t total_u = 0, total_i = 0;
  for (int i = 0; i < n_u_; ++i) total_u += user_count(i);
  for (int j = 0; j < n_m_; ++j) total_i += item_count(j);
  if (total_u != nnz_ || total_i != nnz_) fail("count totals");
  for (int i = 0; i < n_u_; ++i) {
    const auto items = user_items(i);
    const auto values = user_values(i);
    for (std::size_t t = 0; t < items.size(); ++t) {
      if (t > 0 && items[t] <= items[t - 1]) fail("user adjacency not sorted");
      const int j = items[t];
      if (j < 0 || j >= n_m_) fail("item index range");
      // The same entry must appear in the item view with the same value.
      const auto users = item_users(j);
      auto it = std::lower_bound(users.begin(), users.end(), i);
      if (it == users.end() || *it != i) fail("entry missing from item view");
      const double v = item_values(j)[it - users.begin()];
      if (v != values[t]) fail("value mismatch between views");
    }
  }
  for (int j = 0; j < n_m_; ++j) {
    const auto users = item_users(j);
    for (std::size_t t = 1; t < users.size(); ++t)
      if (users[t] <= users[t - 1]) fail("item adjacency not sorted");
  }
}

}  // namespace alsncg
