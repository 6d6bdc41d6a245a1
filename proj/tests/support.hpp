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

// Shared generators and independent oracles for the test suites. Oracles are
// deliberately written against the raw data layouts rather than through the
// library's accumulation paths.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "alsncg/factors.hpp"
#include "alsncg/ratings.hpp"
#include "alsncg/rng.hpp"

namespace testsupport {

using alsncg::FactorModel;
using alsncg::FlatVector;
using alsncg::Rating;
using alsncg::RatingsMatrix;
using alsncg::Rng;

// Bernoulli(density) sparsity pattern with uniform values in [lo, hi].
// Guarantees at least one rating.
inline RatingsMatrix random_ratings(int n_u, int n_m, double density, std::uint64_t seed,
                                    double lo = 0.5, double hi = 5.0) {
  Rng rng(seed);
  std::vector<Rating> triples;
  for (int i = 0; i < n_u; ++i)
    for (int j = 0; j < n_m; ++j)
      if (rng.uniform() < density)
        triples.push_back({i, j, lo + (hi - lo) * rng.uniform()});
  if (triples.empty()) triples.push_back({0, 0, lo});
  return RatingsMatrix::from_triples(n_u, n_m, std::move(triples));
}

// Fully known rank-1 matrix r_ij = u_i * m_j; exactly factorable at n_f = 1.
inline RatingsMatrix rank_one_ratings(int n_u, int n_m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> u(n_u), m(n_m);
  for (double& v : u) v = 0.5 + rng.uniform();
  for (double& v : m) v = 0.5 + rng.uniform();
  std::vector<Rating> triples;
  for (int i = 0; i < n_u; ++i)
    for (int j = 0; j < n_m; ++j) triples.push_back({i, j, u[i] * m[j]});
  return RatingsMatrix::from_triples(n_u, n_m, std::move(triples));
}

// Ratings data with the broad statistics of a movie-ratings corpus: a latent
// low-rank structure plus noise quantized to the half-star scale, skewed item
// popularity, and lognormal-ish per-user rating counts around
// density * n_m.
inline RatingsMatrix movielens_like(int n_u, int n_m, double density, std::uint64_t seed,
                                    int latent_rank = 10) {
  Rng rng(seed);
  std::vector<double> a(static_cast<std::size_t>(n_u) * latent_rank);
  std::vector<double> b(static_cast<std::size_t>(n_m) * latent_rank);
  for (double& v : a) v = rng.uniform();
  for (double& v : b) v = rng.uniform();

  // Item popularity ~ (j+1)^-0.7, sampled by inverse CDF.
  std::vector<double> item_cum(static_cast<std::size_t>(n_m));
  double run = 0.0;
  for (int j = 0; j < n_m; ++j) {
    run += std::pow(static_cast<double>(j + 1), -0.7);
    item_cum[j] = run;
  }

  std::vector<Rating> triples;
  std::vector<int> stamp(static_cast<std::size_t>(n_m), -1);
  for (int i = 0; i < n_u; ++i) {
    const double spread = std::exp(0.35 * rng.normal());
    int count = static_cast<int>(std::lround(density * n_m * spread));
    count = std::clamp(count, 1, n_m);
    int drawn = 0;
    while (drawn < count) {
      const int j = alsncg::sample_cumulative(item_cum, rng.uniform());
      if (stamp[j] == i) continue;
      stamp[j] = i;
      ++drawn;
      double score = 0.0;
      for (int k = 0; k < latent_rank; ++k)
        score += a[static_cast<std::size_t>(i) * latent_rank + k] *
                 b[static_cast<std::size_t>(j) * latent_rank + k];
      // Map the latent score onto the half-star rating scale with noise.
      double value = 0.5 + 4.5 * score / latent_rank + 0.35 * rng.normal();
      value = std::clamp(std::round(value * 2.0) / 2.0, 0.5, 5.0);
      triples.push_back({i, j, value});
    }
  }
  return RatingsMatrix::from_triples(n_u, n_m, std::move(triples));
}

inline FlatVector random_flat(int n_f, int n_u, int n_m, std::uint64_t seed,
                              double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  FlatVector v = FlatVector::zeros(n_f, n_u, n_m);
  for (double& x : v.user_part) x = lo + (hi - lo) * rng.uniform();
  for (double& x : v.item_part) x = lo + (hi - lo) * rng.uniform();
  return v;
}

inline FactorModel random_model(int n_f, int n_u, int n_m, std::uint64_t seed,
                                double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  FactorModel m(n_f, n_u, n_m);
  for (double& x : m.user_data) x = lo + (hi - lo) * rng.uniform();
  for (double& x : m.item_data) x = lo + (hi - lo) * rng.uniform();
  return m;
}

// Independent loss oracle: walks the raw triples and indexes the flat buffers
// directly.
inline double naive_loss(const FlatVector& x, const RatingsMatrix& ratings, double lambda) {
  const int n_f = x.n_f;
  double total = 0.0;
  for (const Rating& t : ratings.to_triples()) {
    double pred = 0.0;
    for (int k = 0; k < n_f; ++k)
      pred += x.user_part[static_cast<std::size_t>(t.user) * n_f + k] *
              x.item_part[static_cast<std::size_t>(t.item) * n_f + k];
    const double e = t.value - pred;
    total += e * e;
  }
  for (int i = 0; i < ratings.n_users(); ++i) {
    double sq = 0.0;
    for (int k = 0; k < n_f; ++k) {
      const double v = x.user_part[static_cast<std::size_t>(i) * n_f + k];
      sq += v * v;
    }
    total += lambda * ratings.user_count(i) * sq;
  }
  for (int j = 0; j < ratings.n_items(); ++j) {
    double sq = 0.0;
    for (int k = 0; k < n_f; ++k) {
      const double v = x.item_part[static_cast<std::size_t>(j) * n_f + k];
      sq += v * v;
    }
    total += lambda * ratings.item_count(j) * sq;
  }
  return total;
}

// naive_loss evaluated in extended precision: the finite-difference quotient
// divides an O(h) loss difference by 2h, so double rounding of the loss would
// leave an absolute noise floor near eps*loss/(2h), far above the gradient's
// small components.
inline long double naive_loss_ld(const FlatVector& x, const RatingsMatrix& ratings,
                                 double lambda) {
  const int n_f = x.n_f;
  long double total = 0.0L;
  for (const Rating& t : ratings.to_triples()) {
    long double pred = 0.0L;
    for (int k = 0; k < n_f; ++k)
      pred += static_cast<long double>(
                  x.user_part[static_cast<std::size_t>(t.user) * n_f + k]) *
              x.item_part[static_cast<std::size_t>(t.item) * n_f + k];
    const long double e = static_cast<long double>(t.value) - pred;
    total += e * e;
  }
  for (int i = 0; i < ratings.n_users(); ++i) {
    long double sq = 0.0L;
    for (int k = 0; k < n_f; ++k) {
      const long double v = x.user_part[static_cast<std::size_t>(i) * n_f + k];
      sq += v * v;
    }
    total += static_cast<long double>(lambda) * ratings.user_count(i) * sq;
  }
  for (int j = 0; j < ratings.n_items(); ++j) {
    long double sq = 0.0L;
    for (int k = 0; k < n_f; ++k) {
      const long double v = x.item_part[static_cast<std::size_t>(j) * n_f + k];
      sq += v * v;
    }
    total += static_cast<long double>(lambda) * ratings.item_count(j) * sq;
  }
  return total;
}

// Central finite differences of the loss, h = 1e-6 * (1 + |x_k|).
inline FlatVector fd_gradient(const FlatVector& x, const RatingsMatrix& ratings,
                              double lambda) {
  FlatVector g = FlatVector::zeros(x.n_f, x.n_u, x.n_m);
  FlatVector probe = x;
  for (std::int64_t k = 0; k < x.size(); ++k) {
    const double xk = x.at(k);
    const double h = 1e-6 * (1.0 + std::abs(xk));
    probe.set(k, xk + h);
    const long double up = naive_loss_ld(probe, ratings, lambda);
    probe.set(k, xk - h);
    const long double down = naive_loss_ld(probe, ratings, lambda);
    probe.set(k, xk);
    g.set(k, static_cast<double>((up - down) / (2.0L * h)));
  }
  return g;
}

// Units in the last place between two finite doubles of the same sign.
inline std::int64_t ulps_between(double a, double b) {
  if (a == b) return 0;
  auto ordered = [](double v) {
    std::int64_t bits = std::bit_cast<std::int64_t>(v);
    return bits >= 0 ? bits : std::numeric_limits<std::int64_t>::min() - bits;
  };
  const std::int64_t d = ordered(a) - ordered(b);
  return d >= 0 ? d : -d;
}

}  // namespace testsupport
