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

#include "alsncg/factors.hpp"

#include <cmath>
#include <stdexcept>

#include "alsncg/rng.hpp"

namespace alsncg {

FactorModel random_init(int n_f, int n_u, int n_m, std::uint64_t seed) {
  if (n_f < 1) throw std::invalid_argument("random_init: n_f must be >= 1");
  FactorModel m(n_f, n_u, n_m);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_f));
  for (double& v : m.item_data) v = rng.uniform() * scale;
  for (double& v : m.user_data) v = rng.uniform() * scale;
  return m;
}

FlatVector FlatVector::zeros(int n_f, int n_u, int n_m) {
  FlatVector v;
  v.n_f = n_f;
  v.n_u = n_u;
  v.n_m = n_m;
  v.user_part.assign(static_cast<std::size_t>(n_f) * n_u, 0.0);
  v.item_part.assign(static_cast<std::size_t>(n_f) * n_m, 0.0);
  return v;
}

double FlatVector::at(std::int64_t k) const {
  const std::int64_t split = static_cast<std::int64_t>(n_f) * n_u;
  if (k < 0 || k >= size()) throw std::out_of_range("FlatVector::at");
  return k < split ? user_part[static_cast<std::size_t>(k)]
                   : item_part[static_cast<std::size_t>(k - split)];
}

void FlatVector::set(std::int64_t k, double v) {
  const std::int64_t split = static_cast<std::int64_t>(n_f) * n_u;
  if (k < 0 || k >= size()) throw std::out_of_range("FlatVector::set");
  if (k < split)
    user_part[static_cast<std::size_t>(k)] = v;
  else
    item_part[static_cast<std::size_t>(k - split)] = v;
}

FlatVector flatten(const FactorModel& model) {
  FlatVector v;
  v.n_f = model.n_f;
  v.n_u = model.n_u;
  v.n_m = model.n_m;
  v.user_part = model.user_data;
  v.item_part = model.item_data;
  return v;
}

FactorModel unflatten(const FlatVector& x) {
  FactorModel m;
  m.n_f = x.n_f;
  m.n_u = x.n_u;
  m.n_m = x.n_m;
  m.user_data = x.user_part;
  m.item_data = x.item_part;
  return m;
}

FlatVector axpby(double a, const FlatVector& x, double b, const FlatVector& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("axpby: shape mismatch");
  FlatVector out;
  out.n_f = x.n_f;
  out.n_u = x.n_u;
  out.n_m = x.n_m;
  out.user_part.resize(x.user_part.size());
  out.item_part.resize(x.item_part.size());
  for (std::size_t k = 0; k < x.user_part.size(); ++k)
    out.user_part[k] = a * x.user_part[k] + b * y.user_part[k];
  for (std::size_t k = 0; k < x.item_part.size(); ++k)
    out.item_part[k] = a * x.item_part[k] + b * y.item_part[k];
  return out;
}

double dot(const FlatVector& x, const FlatVector& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("dot: shape mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < x.user_part.size(); ++k)
    acc += x.user_part[k] * y.user_part[k];
  for (std::size_t k = 0; k < x.item_part.size(); ++k)
    acc += x.item_part[k] * y.item_part[k];
  return acc;
}

double norm(const FlatVector& x) { return std::sqrt(dot(x, x)); }

}  // namespace alsncg
