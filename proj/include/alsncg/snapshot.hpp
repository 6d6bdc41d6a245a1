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

#include "alsncg/factors.hpp"

namespace alsncg {

// Versioned binary model dump: magic "ALSNCG01", five little-endian int64
// header fields {n_f, n_u, n_m, iter, seed}, then the user and item factor
// data as IEEE-754 doubles in column-major order.
struct SnapshotMeta {
  int n_f = 0;
  int n_u = 0;
  int n_m = 0;
  std::int64_t iter = 0;
  std::uint64_t seed = 0;
};

void save_model(const std::string& path, const FactorModel& model, std::int64_t iter,
                std::uint64_t seed);

struct LoadedModel {
  FactorModel model;
  SnapshotMeta meta;
};

/// Throws DataError on a missing file or malformed header.
LoadedModel load_model(const std::string& path);

}  // namespace alsncg
