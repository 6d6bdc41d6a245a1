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

#include "alsncg/snapshot.hpp"

#include <cstring>
#include <fstream>

#include "alsncg/ratings.hpp"

namespace alsncg {

namespace {

constexpr char kMagic[8] = {'A', 'L', 'S', 'N', 'C', 'G', '0', '1'};

void put_i64(std::ofstream& out, std::int64_t v) {
  // Little-endian on every supported target.
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::int64_t get_i64(std::ifstream& in) {
  std::int64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void save_model(const std::string& path, const FactorModel& model, std::int64_t iter,
                std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  put_i64(out, model.n_f);
  put_i64(out, model.n_u);
  put_i64(out, model.n_m);
  put_i64(out, iter);
  put_i64(out, static_cast<std::int64_t>(seed));
  out.write(reinterpret_cast<const char*>(model.user_data.data()),
            static_cast<std::streamsize>(model.user_data.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(model.item_data.data()),
            static_cast<std::streamsize>(model.item_data.size() * sizeof(double)));
  if (!out) throw DataError("failed writing " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw DataError(path + ": not a model snapshot");

  LoadedModel loaded;
  const std::int64_t n_f = get_i64(in);
  const std::int64_t n_u = get_i64(in);
  const std::int64_t n_m = get_i64(in);
  loaded.meta.iter = get_i64(in);
  loaded.meta.seed = static_cast<std::uint64_t>(get_i64(in));
  if (!in || n_f < 1 || n_u < 0 || n_m < 0 || n_f > (1 << 20) ||
      n_u > (1LL << 32) || n_m > (1LL << 32))
    throw DataError(path + ": malformed snapshot header");
  loaded.meta.n_f = static_cast<int>(n_f);
  loaded.meta.n_u = static_cast<int>(n_u);
  loaded.meta.n_m = static_cast<int>(n_m);

  loaded.model = FactorModel(loaded.meta.n_f, loaded.meta.n_u, loaded.meta.n_m);
  in.read(reinterpret_cast<char*>(loaded.model.user_data.data()),
          static_cast<std::streamsize>(loaded.model.user_data.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(loaded.model.item_data.data()),
          static_cast<std::streamsize>(loaded.model.item_data.size() * sizeof(double)));
  if (!in) throw DataError(path + ": truncated snapshot");
  return loaded;
}

}  // namespace alsncg
