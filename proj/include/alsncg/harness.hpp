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

#include <string>
#include <vector>

#include "alsncg/config.hpp"
#include "alsncg/ratings.hpp"
#include "alsncg/snapshot.hpp"

namespace alsncg::harness {

enum class Algo { kAls, kAlsNcg };

const char* algo_name(Algo algo);  // "als" / "als-ncg"

// One benchmark experiment: repeated seeded trainings of one algorithm on
// one dataset, with traces and model snapshots written under out_dir.
struct ExperimentSpec {
  std::string dataset_path;
  bool has_header = false;
  Algo algo = Algo::kAls;
  SolverConfig config;   // config.seed is the base; run r uses seed + r
  int repetitions = 1;
  int top_t = 20;
  std::string out_dir;
};

struct RunSummary {
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  double mean_iter_seconds = 0.0;
  // Iterations that wrote a snapshot and those that did not are timed as two
  // separate populations.
  double mean_iter_seconds_snapshot = 0.0;
  double mean_iter_seconds_plain = 0.0;
};

struct TrainResult {
  std::vector<RunSummary> runs;
  std::vector<std::string> trace_paths;
  std::vector<std::string> final_model_paths;
};

/// "als_seed42" style prefix shared by all files of one run.
std::string run_prefix(Algo algo, std::uint64_t seed);

TrainResult cmd_train(const ExperimentSpec& spec);
/// Same, with the dataset already in memory.
TrainResult cmd_train(const ExperimentSpec& spec, const RatingsMatrix& ratings);

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace);
ConvergenceTrace read_trace_csv(const std::string& path);

/// Mean per-iteration time from a trace: final elapsed over final iteration.
double mean_iteration_seconds(const ConvergenceTrace& trace);

struct SpeedupRow {
  double grad_norm = 0.0;        // smoothed accelerated-run norm level
  std::int64_t als_iters = 0;    // first ALS iteration at or below the level
  std::int64_t ncg_iters = 0;
  double speedup = 0.0;          // (als_iters * t_als) / (ncg_iters * t_ncg)
  bool unbounded = false;        // ALS never reached the level in its trace
};

// For each accelerated-run record (after smoothing its gradient norms with a
// trailing moving average of `smoothing_window` samples), finds the first ALS
// iteration reaching an equal or lesser gradient norm and forms the
// total-time ratio from the supplied mean per-iteration times.
std::vector<SpeedupRow> compute_speedup(const ConvergenceTrace& als_trace,
                                        const ConvergenceTrace& ncg_trace,
                                        double als_iter_seconds, double ncg_iter_seconds,
                                        int smoothing_window = 2);

void write_speedup_csv(const std::string& path, const std::vector<SpeedupRow>& rows);

/// First row at or below the level; throws DataError when the curve never
/// reaches it or the match is unbounded.
double speedup_at_level(const std::vector<SpeedupRow>& rows, double grad_norm_level);

struct RankEvalRow {
  std::int64_t iter = 0;
  double elapsed_s = 0.0;
  double mean_q = 0.0;
};

struct Crossing {
  double threshold = 0.0;
  std::int64_t iter = 0;
  double elapsed_s = 0.0;
  bool reached = false;
};

struct RankEvalResult {
  std::vector<RankEvalRow> rows;
  std::vector<Crossing> crossings;  // thresholds 0.70, 0.80, 0.90, 1.00
};

// Scores each snapshot's rankings against the reference model, with elapsed
// times looked up in the trace by iteration number.
RankEvalResult cmd_rank_eval(const std::vector<LoadedModel>& snapshots,
                             const ConvergenceTrace& trace, const FactorModel& reference,
                             int t, int n_workers = 1);

// Filesystem variant: scans out_dir for `<prefix>_snap*.bin`, reads
// `<prefix>_trace.csv`, and scores against reference_path (empty = the run's
// `<prefix>_final.bin`).
RankEvalResult cmd_rank_eval_dir(const std::string& out_dir, const std::string& prefix,
                                 const std::string& reference_path, int t,
                                 int n_workers = 1);

void write_rank_eval_csv(const std::string& rows_path, const std::string& crossings_path,
                         const RankEvalResult& result);

}  // namespace alsncg::harness
