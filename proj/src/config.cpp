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

#include "alsncg/config.hpp"

#include <stdexcept>

namespace alsncg {

void SolverConfig::validate() const {
  auto bad = [](const char* what) { throw std::invalid_argument(std::string("SolverConfig: ") + what); };
  if (lambda < 0.0) bad("lambda must be >= 0");
  if (n_f < 1) bad("n_f must be >= 1");
  if (max_iters < 0) bad("max_iters must be >= 0");
  if (alpha0 <= 0.0) bad("alpha0 must be > 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) bad("armijo_c must be in (0,1)");
  if (!(tau > 0.0 && tau < 1.0)) bad("tau must be in (0,1)");
  if (max_backtracks < 0) bad("max_backtracks must be >= 0");
  if (n_blocks < 0) bad("n_blocks must be >= 0 (0 = use n_workers)");
  if (n_workers < 1) bad("n_workers must be >= 1");
  if (trace_every < 1) bad("trace_every must be >= 1");
  if (snapshot_every < 0) bad("snapshot_every must be >= 0");
}

void ConvergenceTrace::append(const TraceRecord& rec) {
  if (!records.empty()) {
    if (rec.iter <= records.back().iter)
      throw std::logic_error("ConvergenceTrace: iterations must be strictly increasing");
    if (rec.elapsed_seconds < records.back().elapsed_seconds)
      throw std::logic_error("ConvergenceTrace: elapsed time must be non-decreasing");
  }
  records.push_back(rec);
}

}  // namespace alsncg
