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

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "alsncg/factors.hpp"

namespace alsncg {

// Shared solver settings. All solver arithmetic is double precision; the
// tolerance is applied to the gradient norm normalized by the number of
// variables, (1/N)||g|| with N = n_f*(n_u+n_m).
struct SolverConfig {
  double lambda = 0.1;        // regularization weight, >= 0
  int n_f = 10;               // factor rank
  int max_iters = 10000;      // cap on outer iterations
  double tol = 1e-6;          // threshold on (1/N)||g||; <= 0 disables
  std::uint64_t seed = 0;     // seed for the starting iterate
  double alpha0 = 10.0;       // initial line-search step
  double armijo_c = 0.5;      // sufficient-decrease constant, in (0,1)
  double tau = 0.9;           // backtrack shrink factor, in (0,1)
  int max_backtracks = 100;   // cap on line-search shrinks
  int n_blocks = 0;           // partition count; 0 = use n_workers
  int n_workers = 1;          // threads for column solves / reductions
  int trace_every = 1;        // iterations between trace records
  int snapshot_every = 0;     // snapshot cadence in iterations; 0 = off
  bool paper_timing = false;  // exclude instrumentation (gradient norm for
                              // plain ALS, trace loss) from elapsed time

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
  /// n_blocks with the 0 = n_workers default resolved.
  int resolved_blocks() const { return n_blocks > 0 ? n_blocks : (n_workers > 0 ? n_workers : 1); }
};

struct TraceRecord {
  int iter = 0;
  double loss = 0.0;
  double grad_norm = 0.0;  // (1/N)||g||
  double elapsed_seconds = 0.0;
  int backtracks = 0;
  std::int64_t shuffled_columns = 0;
  bool restarted = false;  // NCG only: direction restart / ALS fallback step
};

// Per-run convergence history. Appends enforce strictly increasing iteration
// numbers and non-decreasing elapsed time.
struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  void append(const TraceRecord& rec);
  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  const TraceRecord& back() const { return records.back(); }
  const TraceRecord& operator[](std::size_t k) const { return records[k]; }
};

// Degree-4 polynomial Q(alpha) = sum_n c[n] alpha^n; used as the exact loss
// profile along a search direction.
struct QuarticPoly {
  std::array<double, 5> c{};

  double operator()(double alpha) const {
    return (((c[4] * alpha + c[3]) * alpha + c[2]) * alpha + c[1]) * alpha + c[0];
  }
};

// Invoked with the current model after selected iterations (and at iteration
// zero) when snapshotting is enabled.
using SnapshotSink = std::function<void(const FactorModel&, int iter)>;

struct SolveResult {
  FactorModel model;
  ConvergenceTrace trace;
  bool converged = false;
  int iterations = 0;
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  int restarts = 0;          // NCG direction restarts
  int fallback_steps = 0;    // NCG steps replaced by a plain ALS application
  int fallback_columns = 0;  // column solves routed to the least-norm path
};

}  // namespace alsncg
