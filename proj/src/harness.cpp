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

#include "alsncg/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "alsncg/als.hpp"
#include "alsncg/data.hpp"
#include "alsncg/ncg.hpp"
#include "alsncg/ranking.hpp"

namespace alsncg::harness {

namespace {

namespace fs = std::filesystem;

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& field, const std::string& path) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw DataError(path + ": bad numeric field '" + field + "'");
  return v;
}

std::int64_t parse_i64_field(const std::string& field, const std::string& path) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw DataError(path + ": bad integer field '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

const char* algo_name(Algo algo) { return algo == Algo::kAls ? "als" : "als-ncg"; }

std::string run_prefix(Algo algo, std::uint64_t seed) {
  return std::string(algo_name(algo)) + "_seed" + std::to_string(seed);
}

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "iter,loss,grad_norm,elapsed_s,backtracks,shuffled_columns\n";
  for (const TraceRecord& rec : trace.records) {
    out << rec.iter << ',' << g17(rec.loss) << ',' << g17(rec.grad_norm) << ','
        << g17(rec.elapsed_seconds) << ',' << rec.backtracks << ','
        << rec.shuffled_columns << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

ConvergenceTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  ConvergenceTrace trace;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) throw DataError(path + ": expected 6 trace columns");
    TraceRecord rec;
    rec.iter = static_cast<int>(parse_i64_field(fields[0], path));
    rec.loss = parse_double_field(fields[1], path);
    rec.grad_norm = parse_double_field(fields[2], path);
    rec.elapsed_seconds = parse_double_field(fields[3], path);
    rec.backtracks = static_cast<int>(parse_i64_field(fields[4], path));
    rec.shuffled_columns = parse_i64_field(fields[5], path);
    trace.append(rec);
  }
  if (trace.empty()) throw DataError(path + ": empty trace");
  return trace;
}

double mean_iteration_seconds(const ConvergenceTrace& trace) {
  if (trace.empty()) throw DataError("mean_iteration_seconds: empty trace");
  const TraceRecord& first = trace.records.front();
  const TraceRecord& last = trace.records.back();
  if (last.iter == first.iter) return 0.0;
  return (last.elapsed_seconds - first.elapsed_seconds) /
         static_cast<double>(last.iter - first.iter);
}

namespace {

RunSummary summarize_run(std::uint64_t seed, const SolveResult& result, int snapshot_every) {
  RunSummary summary;
  summary.seed = seed;
  summary.iterations = result.iterations;
  summary.converged = result.converged;
  summary.final_loss = result.final_loss;
  summary.final_grad_norm = result.final_grad_norm;
  summary.mean_iter_seconds = mean_iteration_seconds(result.trace);
  summary.mean_iter_seconds_snapshot = summary.mean_iter_seconds;
  summary.mean_iter_seconds_plain = summary.mean_iter_seconds;

  // Per-iteration deltas are only exact when every iteration was recorded.
  const auto& recs = result.trace.records;
  if (snapshot_every > 0 && recs.size() >= 2) {
    double snap_time = 0.0, plain_time = 0.0;
    std::int64_t snap_n = 0, plain_n = 0;
    for (std::size_t k = 1; k < recs.size(); ++k) {
      if (recs[k].iter != recs[k - 1].iter + 1) continue;
      const double dt = recs[k].elapsed_seconds - recs[k - 1].elapsed_seconds;
      if (recs[k].iter % snapshot_every == 0) {
        snap_time += dt;
        ++snap_n;
      } else {
        plain_time += dt;
        ++plain_n;
      }
    }
    if (snap_n > 0) summary.mean_iter_seconds_snapshot = snap_time / snap_n;
    if (plain_n > 0) summary.mean_iter_seconds_plain = plain_time / plain_n;
  }
  return summary;
}

}  // namespace

TrainResult cmd_train(const ExperimentSpec& spec) {
  const auto ingested = data::ingest_csv(spec.dataset_path, spec.has_header);
  return cmd_train(spec, ingested.matrix);
}

TrainResult cmd_train(const ExperimentSpec& spec, const RatingsMatrix& ratings) {
  if (spec.repetitions < 1) throw std::invalid_argument("cmd_train: repetitions must be >= 1");
  spec.config.validate();
  fs::create_directories(spec.out_dir);

  TrainResult result;
  std::ofstream summary_out(fs::path(spec.out_dir) / "summary.csv", std::ios::binary);
  if (!summary_out) throw DataError("cannot write summary.csv under " + spec.out_dir);
  summary_out << "algo,seed,iterations,converged,final_loss,final_grad_norm,"
                 "mean_iter_s,mean_snap_iter_s,mean_plain_iter_s\n";

  for (int rep = 0; rep < spec.repetitions; ++rep) {
    SolverConfig config = spec.config;
    config.seed = spec.config.seed + static_cast<std::uint64_t>(rep);
    const std::string prefix = run_prefix(spec.algo, config.seed);
    const fs::path base = fs::path(spec.out_dir) / prefix;

    SnapshotSink sink;
    if (config.snapshot_every > 0) {
      sink = [&, base](const FactorModel& model, int iter) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_snap%06d.bin", iter);
        save_model(base.string() + suffix, model, iter, config.seed);
      };
    }

    const SolveResult solve = spec.algo == Algo::kAls
                                  ? als::als_solve(ratings, config, sink)
                                  : ncg::als_ncg_solve(ratings, config, sink);

    const std::string trace_path = base.string() + "_trace.csv";
    write_trace_csv(trace_path, solve.trace);
    const std::string model_path = base.string() + "_final.bin";
    save_model(model_path, solve.model, solve.iterations, config.seed);

    const RunSummary summary = summarize_run(config.seed, solve, config.snapshot_every);
    summary_out << algo_name(spec.algo) << ',' << summary.seed << ',' << summary.iterations
                << ',' << (summary.converged ? 1 : 0) << ',' << g17(summary.final_loss) << ','
                << g17(summary.final_grad_norm) << ',' << g17(summary.mean_iter_seconds) << ','
                << g17(summary.mean_iter_seconds_snapshot) << ','
                << g17(summary.mean_iter_seconds_plain) << '\n';

    result.runs.push_back(summary);
    result.trace_paths.push_back(trace_path);
    result.final_model_paths.push_back(model_path);
  }
  return result;
}

std::vector<SpeedupRow> compute_speedup(const ConvergenceTrace& als_trace,
                                        const ConvergenceTrace& ncg_trace,
                                        double als_iter_seconds, double ncg_iter_seconds,
                                        int smoothing_window) {
  if (als_trace.empty() || ncg_trace.empty())
    throw std::invalid_argument("compute_speedup: empty trace");
  if (smoothing_window < 1)
    throw std::invalid_argument("compute_speedup: smoothing window must be >= 1");
  if (als_iter_seconds <= 0.0) als_iter_seconds = mean_iteration_seconds(als_trace);
  if (ncg_iter_seconds <= 0.0) ncg_iter_seconds = mean_iteration_seconds(ncg_trace);
  if (als_iter_seconds <= 0.0 || ncg_iter_seconds <= 0.0)
    throw DataError("compute_speedup: non-positive per-iteration times");

  const auto& ncg = ncg_trace.records;
  std::vector<double> smoothed(ncg.size());
  for (std::size_t r = 0; r < ncg.size(); ++r) {
    const std::size_t lo = r + 1 >= static_cast<std::size_t>(smoothing_window)
                               ? r + 1 - static_cast<std::size_t>(smoothing_window)
                               : 0;
    double sum = 0.0;
    for (std::size_t k = lo; k <= r; ++k) sum += ncg[k].grad_norm;
    smoothed[r] = sum / static_cast<double>(r - lo + 1);
  }

  std::vector<SpeedupRow> rows;
  for (std::size_t r = 0; r < ncg.size(); ++r) {
    if (ncg[r].iter < 1) continue;
    SpeedupRow row;
    row.grad_norm = smoothed[r];
    row.ncg_iters = ncg[r].iter;
    row.unbounded = true;
    for (const TraceRecord& rec : als_trace.records) {
      if (rec.grad_norm <= row.grad_norm) {
        row.als_iters = rec.iter;
        row.unbounded = false;
        break;
      }
    }
    if (!row.unbounded) {
      row.speedup = (static_cast<double>(row.als_iters) * als_iter_seconds) /
                    (static_cast<double>(row.ncg_iters) * ncg_iter_seconds);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_speedup_csv(const std::string& path, const std::vector<SpeedupRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "grad_norm,als_iters,ncg_iters,speedup\n";
  for (const SpeedupRow& row : rows) {
    out << g17(row.grad_norm) << ',';
    if (row.unbounded)
      out << "unbounded," << row.ncg_iters << ",unbounded\n";
    else
      out << row.als_iters << ',' << row.ncg_iters << ',' << g17(row.speedup) << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

double speedup_at_level(const std::vector<SpeedupRow>& rows, double grad_norm_level) {
  for (const SpeedupRow& row : rows) {
    if (row.grad_norm <= grad_norm_level) {
      if (row.unbounded)
        throw DataError("speedup_at_level: ALS never reached the requested level");
      return row.speedup;
    }
  }
  throw DataError("speedup_at_level: curve never reaches the requested gradient norm");
}

RankEvalResult cmd_rank_eval(const std::vector<LoadedModel>& snapshots,
                             const ConvergenceTrace& trace, const FactorModel& reference,
                             int t, int n_workers) {
  if (snapshots.empty()) throw DataError("cmd_rank_eval: no snapshots");
  std::map<std::int64_t, double> elapsed_by_iter;
  for (const TraceRecord& rec : trace.records) elapsed_by_iter[rec.iter] = rec.elapsed_seconds;

  std::vector<const LoadedModel*> ordered;
  ordered.reserve(snapshots.size());
  for (const LoadedModel& snap : snapshots) ordered.push_back(&snap);
  std::sort(ordered.begin(), ordered.end(), [](const LoadedModel* a, const LoadedModel* b) {
    return a->meta.iter < b->meta.iter;
  });

  RankEvalResult result;
  for (const LoadedModel* snap : ordered) {
    const auto it = elapsed_by_iter.find(snap->meta.iter);
    if (it == elapsed_by_iter.end())
      throw DataError("cmd_rank_eval: trace has no record for iteration " +
                      std::to_string(snap->meta.iter) +
                      " (set trace-every to divide snapshot-every)");
    RankEvalRow row;
    row.iter = snap->meta.iter;
    row.elapsed_s = it->second;
    row.mean_q = ranking::mean_ranking_accuracy(snap->model, reference, t, n_workers);
    result.rows.push_back(row);
  }

  for (double threshold : {0.70, 0.80, 0.90, 1.00}) {
    Crossing crossing;
    crossing.threshold = threshold;
    for (const RankEvalRow& row : result.rows) {
      if (row.mean_q >= threshold - 1e-12) {
        crossing.iter = row.iter;
        crossing.elapsed_s = row.elapsed_s;
        crossing.reached = true;
        break;
      }
    }
    result.crossings.push_back(crossing);
  }
  return result;
}

RankEvalResult cmd_rank_eval_dir(const std::string& out_dir, const std::string& prefix,
                                 const std::string& reference_path, int t, int n_workers) {
  std::vector<LoadedModel> snapshots;
  const std::string snap_mark = prefix + "_snap";
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(snap_mark, 0) == 0 && name.size() > 4 &&
        name.compare(name.size() - 4, 4, ".bin") == 0)
      snapshots.push_back(load_model(entry.path().string()));
  }
  if (snapshots.empty())
    throw DataError("cmd_rank_eval: no snapshots matching " + snap_mark + "* under " + out_dir);

  // The run's converged model closes the curve unless a snapshot already
  // landed on its iteration.
  const fs::path final_path = fs::path(out_dir) / (prefix + "_final.bin");
  if (fs::exists(final_path)) {
    LoadedModel final_model = load_model(final_path.string());
    const bool already =
        std::any_of(snapshots.begin(), snapshots.end(), [&](const LoadedModel& s) {
          return s.meta.iter == final_model.meta.iter;
        });
    if (!already) snapshots.push_back(std::move(final_model));
  }

  const ConvergenceTrace trace =
      read_trace_csv((fs::path(out_dir) / (prefix + "_trace.csv")).string());
  const std::string ref_path = reference_path.empty()
                                   ? (fs::path(out_dir) / (prefix + "_final.bin")).string()
                                   : reference_path;
  const LoadedModel reference = load_model(ref_path);
  return cmd_rank_eval(snapshots, trace, reference.model, t, n_workers);
}

void write_rank_eval_csv(const std::string& rows_path, const std::string& crossings_path,
                         const RankEvalResult& result) {
  {
    std::ofstream out(rows_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + rows_path);
    out << "iter,elapsed_s,mean_q\n";
    for (const RankEvalRow& row : result.rows)
      out << row.iter << ',' << g17(row.elapsed_s) << ',' << g17(row.mean_q) << '\n';
    if (!out) throw DataError("failed writing " + rows_path);
  }
  {
    std::ofstream out(crossings_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + crossings_path);
    out << "threshold,iter,elapsed_s\n";
    for (const Crossing& crossing : result.crossings) {
      out << g17(crossing.threshold) << ',';
      if (crossing.reached)
        out << crossing.iter << ',' << g17(crossing.elapsed_s) << '\n';
      else
        out << "unreached,unreached\n";
    }
    if (!out) throw DataError("failed writing " + crossings_path);
  }
}

}  // namespace alsncg::harness
