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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alsncg {

struct Rating {
  int user = 0;
  int item = 0;
  double value = 0.0;
};

// Malformed or inconsistent input data (CSV parse failures, duplicate
// ratings, invalid subset windows, ...). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateRatingError : public DataError {
 public:
  DuplicateRatingError(int user, int item);
  int user;
  int item;
};

// Sparse rating store kept in two compressed-row views: one indexed by user
// and one by item. Both views encode the identical set of
// (user, item, value) triples, and adjacency lists are sorted by index so
// every per-column accumulation has a single fixed summation order.
// Immutable after construction; safe to share across threads.
class RatingsMatrix {
 public:
  RatingsMatrix() = default;

  // Builds both views from triples. Throws DataError on out-of-range indices
  // or non-finite values, DuplicateRatingError on repeated (user, item)
  // pairs. With single_precision_storage the values are rounded through IEEE
  // single precision at construction; all downstream arithmetic stays double.
  static RatingsMatrix from_triples(int n_users, int n_items,
                                    std::vector<Rating> triples,
                                    bool single_precision_storage = false);

  int n_users() const { return n_u_; }
  int n_items() const { return n_m_; }
  std::int64_t nnz() const { return nnz_; }

  int user_count(int i) const {
    return static_cast<int>(uptr_[i + 1] - uptr_[i]);
  }
  int item_count(int j) const {
    return static_cast<int>(iptr_[j + 1] - iptr_[j]);
  }

  /// Item indices rated by user i, ascending.
  std::span<const int> user_items(int i) const {
    return {uidx_.data() + uptr_[i], static_cast<std::size_t>(user_count(i))};
  }
  std::span<const double> user_values(int i) const {
    return {uval_.data() + uptr_[i], static_cast<std::size_t>(user_count(i))};
  }
  /// User indices that rated item j, ascending.
  std::span<const int> item_users(int j) const {
    return {iidx_.data() + iptr_[j], static_cast<std::size_t>(item_count(j))};
  }
  std::span<const double> item_values(int j) const {
    return {ival_.data() + iptr_[j], static_cast<std::size_t>(item_count(j))};
  }

  bool single_precision_storage() const { return single_; }

  /// Returns all triples in user-major order (test and export support).
  std::vector<Rating> to_triples() const;

  // Verifies that the two views agree entry for entry; throws
  // std::logic_error on any mismatch. Test support.
  void check_consistent() const;

 private:
  int n_u_ = 0;
  int n_m_ = 0;
  std::int64_t nnz_ = 0;
  bool single_ = false;
  std::vector<std::int64_t> uptr_, iptr_;
  std::vector<int> uidx_, iidx_;
  std::vector<double> uval_, ival_;
};

}  // namespace alsncg
