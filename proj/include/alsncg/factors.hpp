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
#include <vector>

namespace alsncg {

// Dense user/item factor matrices, column-major with one length-n_f column
// per user and per item.
struct FactorModel {
  int n_f = 0;
  int n_u = 0;
  int n_m = 0;
  std::vector<double> user_data;  // n_f x n_u
  std::vector<double> item_data;  // n_f x n_m

  FactorModel() = default;
  FactorModel(int nf, int nu, int nm)
      : n_f(nf),
        n_u(nu),
        n_m(nm),
        user_data(static_cast<std::size_t>(nf) * nu, 0.0),
        item_data(static_cast<std::size_t>(nf) * nm, 0.0) {}

  double* user_col(int i) { return user_data.data() + static_cast<std::size_t>(i) * n_f; }
  const double* user_col(int i) const { return user_data.data() + static_cast<std::size_t>(i) * n_f; }
  double* item_col(int j) { return item_data.data() + static_cast<std::size_t>(j) * n_f; }
  const double* item_col(int j) const { return item_data.data() + static_cast<std::size_t>(j) * n_f; }
};

// Seeded starting model: item entries first, then user entries, i.i.d.
// uniform on [0,1) scaled by 1/sqrt(n_f) so initial predicted ratings are
// O(1). Drawing the item side first keeps the item initialization for a
// given seed independent of whether the user side is consumed.
FactorModel random_init(int n_f, int n_u, int n_m, std::uint64_t seed);

// Concatenated optimization vector: user factor columns u_1..u_{n_u} followed
// by item factor columns m_1..m_{n_m}. Stored as two segments so block
// operations align with the user/item partitionings, but indexed logically as
// one length n_f*(n_u+n_m) vector.
struct FlatVector {
  int n_f = 0;
  int n_u = 0;
  int n_m = 0;
  std::vector<double> user_part;  // n_f * n_u
  std::vector<double> item_part;  // n_f * n_m

  static FlatVector zeros(int n_f, int n_u, int n_m);

  std::int64_t size() const {
    return static_cast<std::int64_t>(n_f) * (static_cast<std::int64_t>(n_u) + n_m);
  }
  bool same_shape(const FlatVector& o) const {
    return n_f == o.n_f && n_u == o.n_u && n_m == o.n_m;
  }

  double* user_col(int i) { return user_part.data() + static_cast<std::size_t>(i) * n_f; }
  const double* user_col(int i) const { return user_part.data() + static_cast<std::size_t>(i) * n_f; }
  double* item_col(int j) { return item_part.data() + static_cast<std::size_t>(j) * n_f; }
  const double* item_col(int j) const { return item_part.data() + static_cast<std::size_t>(j) * n_f; }

  /// Logical element access across the user-then-item layout.
  double at(std::int64_t k) const;
  void set(std::int64_t k, double v);
};

/// Lossless (bitwise) copy of the model into the flat layout.
FlatVector flatten(const FactorModel& model);
/// Inverse of flatten.
FactorModel unflatten(const FlatVector& x);

// a*x + b*y, componentwise; inputs untouched. Throws std::invalid_argument on
// shape mismatch.
FlatVector axpby(double a, const FlatVector& x, double b, const FlatVector& y);
/// Euclidean inner product, fixed user-then-item summation order.
double dot(const FlatVector& x, const FlatVector& y);
double norm(const FlatVector& x);

}  // namespace alsncg
