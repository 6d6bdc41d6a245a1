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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alsncg/config.hpp"
#include "alsncg/factors.hpp"
#include "alsncg/ratings.hpp"
#include "support.hpp"

using namespace alsncg;
using namespace testsupport;

TEST_CASE("flatten concatenates user columns then item columns") {
  FactorModel m(1, 2, 1);
  m.user_data = {2.0, 3.0};
  m.item_data = {5.0};
  const FlatVector v = flatten(m);
  CHECK(v.size() == 3);
  CHECK(v.at(0) == 2.0);
  CHECK(v.at(1) == 3.0);
  CHECK(v.at(2) == 5.0);

  FactorModel m2(2, 1, 1);
  m2.user_data = {1.0, 2.0};
  m2.item_data = {3.0, 4.0};
  const FlatVector v2 = flatten(m2);
  CHECK(v2.at(0) == 1.0);
  CHECK(v2.at(1) == 2.0);
  CHECK(v2.at(2) == 3.0);
  CHECK(v2.at(3) == 4.0);
}

TEST_CASE("unflatten(flatten(m)) is a bitwise round trip") {
  const FactorModel m = random_model(3, 7, 5, 11);
  const FactorModel back = unflatten(flatten(m));
  CHECK(back.n_f == m.n_f);
  CHECK(back.user_data == m.user_data);
  CHECK(back.item_data == m.item_data);
}

TEST_CASE("axpby basics") {
  const FlatVector x = random_flat(2, 3, 2, 5);
  const FlatVector y = random_flat(2, 3, 2, 6);

  const FlatVector copy = axpby(1.0, x, 0.0, y);
  CHECK(copy.user_part == x.user_part);
  CHECK(copy.item_part == x.item_part);

  const FlatVector zero = axpby(1.0, x, -1.0, x);
  for (std::int64_t k = 0; k < zero.size(); ++k) CHECK(zero.at(k) == 0.0);

  FlatVector a = FlatVector::zeros(1, 1, 1);
  a.user_part = {1.0};
  a.item_part = {1.0};
  FlatVector b = FlatVector::zeros(1, 1, 1);
  b.user_part = {0.0};
  b.item_part = {1.0};
  const FlatVector out = axpby(2.0, a, 3.0, b);
  CHECK(out.at(0) == 2.0);
  CHECK(out.at(1) == 5.0);

  const FlatVector wrong = random_flat(2, 3, 3, 7);
  CHECK_THROWS_AS(axpby(1.0, x, 1.0, wrong), std::invalid_argument);
  CHECK_THROWS_AS(dot(x, wrong), std::invalid_argument);
}

TEST_CASE("dot and norm basics") {
  FlatVector e1 = FlatVector::zeros(1, 2, 0);
  FlatVector e2 = FlatVector::zeros(1, 2, 0);
  e1.user_part = {1.0, 0.0};
  e2.user_part = {0.0, 1.0};
  CHECK(dot(e1, e2) == 0.0);
  CHECK(norm(FlatVector::zeros(2, 3, 4)) == 0.0);

  FlatVector a = FlatVector::zeros(1, 2, 0);
  FlatVector b = FlatVector::zeros(1, 2, 0);
  a.user_part = {1.0, 2.0};
  b.user_part = {3.0, 4.0};
  CHECK(dot(a, b) == 11.0);
}

TEST_CASE("vector ops match a scalar-loop oracle to 8 ulps") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const int n_f = 4, n_u = 800, n_m = 1200;  // length ~ 8e3
    const FlatVector x = random_flat(n_f, n_u, n_m, 100 + seed);
    const FlatVector y = random_flat(n_f, n_u, n_m, 200 + seed);

    double expect_dot = 0.0;
    for (std::int64_t k = 0; k < x.size(); ++k) expect_dot += x.at(k) * y.at(k);
    CHECK(ulps_between(dot(x, y), expect_dot) <= 8);
    CHECK(ulps_between(norm(x), std::sqrt(dot(x, x))) <= 8);

    const FlatVector z = axpby(1.5, x, -2.5, y);
    for (std::int64_t k = 0; k < x.size(); ++k)
      CHECK(ulps_between(z.at(k), 1.5 * x.at(k) - 2.5 * y.at(k)) <= 8);
  }
}

TEST_CASE("RatingsMatrix dual views stay consistent") {
  const RatingsMatrix r = random_ratings(40, 25, 0.2, 3);
  r.check_consistent();
  std::int64_t total_users = 0;
  for (int i = 0; i < r.n_users(); ++i) total_users += r.user_count(i);
  std::int64_t total_items = 0;
  for (int j = 0; j < r.n_items(); ++j) total_items += r.item_count(j);
  CHECK(total_users == r.nnz());
  CHECK(total_items == r.nnz());
}

TEST_CASE("RatingsMatrix validates its inputs") {
  CHECK_THROWS_AS(RatingsMatrix::from_triples(2, 2, {{0, 2, 1.0}}), DataError);
  CHECK_THROWS_AS(RatingsMatrix::from_triples(2, 2, {{-1, 0, 1.0}}), DataError);
  CHECK_THROWS_AS(RatingsMatrix::from_triples(2, 2, {{0, 0, std::nan("")}}), DataError);
  CHECK_THROWS_AS(
      RatingsMatrix::from_triples(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {0, 0, 3.0}}),
      DuplicateRatingError);
}

TEST_CASE("single-precision storage rounds values through float") {
  const double value = 0.1;  // not representable in single precision
  const RatingsMatrix r =
      RatingsMatrix::from_triples(1, 1, {{0, 0, value}}, /*single_precision_storage=*/true);
  CHECK(r.user_values(0)[0] == static_cast<double>(static_cast<float>(value)));
  CHECK(r.user_values(0)[0] != value);
  const RatingsMatrix d = RatingsMatrix::from_triples(1, 1, {{0, 0, value}});
  CHECK(d.user_values(0)[0] == value);
}

TEST_CASE("QuarticPoly evaluates with Horner") {
  QuarticPoly q{{1.0, -2.0, 3.0, 0.5, 0.25}};
  for (double alpha : {0.0, 0.3, 1.0, 2.7}) {
    const double direct = 1.0 - 2.0 * alpha + 3.0 * alpha * alpha +
                          0.5 * alpha * alpha * alpha +
                          0.25 * alpha * alpha * alpha * alpha;
    CHECK(q(alpha) == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("ConvergenceTrace enforces its ordering invariants") {
  ConvergenceTrace trace;
  trace.append({0, 1.0, 1.0, 0.0, 0, 0, false});
  trace.append({1, 0.5, 0.5, 0.1, 0, 0, false});
  CHECK_THROWS_AS(trace.append({1, 0.4, 0.4, 0.2, 0, 0, false}), std::logic_error);
  CHECK_THROWS_AS(trace.append({2, 0.4, 0.4, 0.05, 0, 0, false}), std::logic_error);
}

TEST_CASE("SolverConfig validation") {
  SolverConfig config;
  CHECK_NOTHROW(config.validate());
  config.tau = 1.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SolverConfig{};
  config.lambda = -0.1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SolverConfig{};
  config.n_blocks = 0;
  config.n_workers = 3;
  CHECK(config.resolved_blocks() == 3);
}
