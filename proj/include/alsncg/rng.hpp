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
#include <random>
#include <vector>

namespace alsncg {

// Seeded RNG wrapper. Every draw consumes the raw mt19937_64 stream directly,
// so sampled sequences do not depend on the standard library's distribution
// implementations and are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, n); n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal deviate (Box-Muller, cached spare).
  double normal();

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// First index whose cumulative weight exceeds u * cumulative.back().
// `cumulative` must be non-decreasing with a positive last entry; entries with
// zero incremental weight are never selected.
int sample_cumulative(const std::vector<double>& cumulative, double u);

}  // namespace alsncg
