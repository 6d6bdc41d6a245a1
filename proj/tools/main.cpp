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

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "alsncg/data.hpp"
#include "alsncg/harness.hpp"

namespace fs = std::filesystem;
using namespace alsncg;

namespace {

void add_config_support(CLI::App* sub) {
  sub->set_config("--config", "", "Flat key = value config file; flags override it");
}

struct TrainOptions {
  std::string input;
  bool header = false;
  std::string algo = "als";
  harness::ExperimentSpec spec;
};

void run_train(const TrainOptions& options) {
  harness::ExperimentSpec spec = options.spec;
  spec.dataset_path = options.input;
  spec.has_header = options.header;
  spec.algo = options.algo == "als" ? harness::Algo::kAls : harness::Algo::kAlsNcg;
  const harness::TrainResult result = harness::cmd_train(spec);
  for (std::size_t r = 0; r < result.runs.size(); ++r) {
    const harness::RunSummary& run = result.runs[r];
    std::printf("%s seed %llu: %d iterations, %s, final grad norm %.3e, trace %s\n",
                harness::algo_name(spec.algo), static_cast<unsigned long long>(run.seed),
                run.iterations, run.converged ? "converged" : "max iterations",
                run.final_grad_norm, result.trace_paths[r].c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ALS and NCG-accelerated ALS matrix factorization harness"};
  app.require_subcommand(1);
  std::function<void()> action;

  // ingest ------------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Re-index a ratings CSV densely");
  add_config_support(ingest);
  struct {
    std::string input, out;
    bool header = false;
  } ingest_opt;
  ingest->add_option("--in", ingest_opt.input, "Input ratings CSV")->required();
  ingest->add_flag("--header", ingest_opt.header, "Skip a single header line");
  ingest->add_option("--out", ingest_opt.out, "Output directory")->required();
  ingest->callback([&] {
    action = [&] {
      const data::IngestResult result = data::ingest_csv(ingest_opt.input, ingest_opt.header);
      fs::create_directories(ingest_opt.out);
      data::write_ratings_csv((fs::path(ingest_opt.out) / "ratings.csv").string(), result.matrix);
      data::write_id_map_csv((fs::path(ingest_opt.out) / "user_map.csv").string(), result.user_ids);
      data::write_id_map_csv((fs::path(ingest_opt.out) / "item_map.csv").string(), result.item_ids);
      std::printf("ingested %lld ratings (%d users x %d items) into %s\n",
                  static_cast<long long>(result.matrix.nnz()), result.matrix.n_users(),
                  result.matrix.n_items(), ingest_opt.out.c_str());
    };
  });

  // subset ------------------------------------------------------------------
  auto* subset = app.add_subcommand("subset", "Median-window subset of a ratings CSV");
  add_config_support(subset);
  struct {
    std::string input, out;
    bool header = false;
    int users = 400;
    int items = 80;
  } subset_opt;
  subset->add_option("--in", subset_opt.input, "Input ratings CSV")->required();
  subset->add_flag("--header", subset_opt.header, "Skip a single header line");
  subset->add_option("--users", subset_opt.users, "Users to keep")->required();
  subset->add_option("--items", subset_opt.items, "Items to keep")->required();
  subset->add_option("--out", subset_opt.out, "Output directory")->required();
  subset->callback([&] {
    action = [&] {
      const data::IngestResult full = data::ingest_csv(subset_opt.input, subset_opt.header);
      const data::SubsetResult sub =
          data::build_subset(full.matrix, subset_opt.users, subset_opt.items);
      fs::create_directories(subset_opt.out);
      data::write_ratings_csv((fs::path(subset_opt.out) / "ratings.csv").string(), sub.matrix);
      // Translate back to the ids of the original file.
      std::vector<std::int64_t> user_ids, item_ids;
      for (int u : sub.user_ids) user_ids.push_back(full.user_ids[u]);
      for (int j : sub.item_ids) item_ids.push_back(full.item_ids[j]);
      data::write_id_map_csv((fs::path(subset_opt.out) / "user_map.csv").string(), user_ids);
      data::write_id_map_csv((fs::path(subset_opt.out) / "item_map.csv").string(), item_ids);
      std::printf("subset %dx%d with %lld ratings written to %s\n", sub.matrix.n_users(),
                  sub.matrix.n_items(), static_cast<long long>(sub.matrix.nnz()),
                  subset_opt.out.c_str());
    };
  });

  // synth -------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Sample a synthetic dataset with matched statistics");
  add_config_support(synth);
  struct {
    std::string input, out;
    bool header = false;
    int users = 0;
    std::uint64_t seed = 0;
  } synth_opt;
  synth->add_option("--in", synth_opt.input, "Source ratings CSV")->required();
  synth->add_flag("--header", synth_opt.header, "Skip a single header line");
  synth->add_option("--users", synth_opt.users, "Synthetic user count")->required();
  synth->add_option("--seed", synth_opt.seed, "RNG seed");
  synth->add_option("--out", synth_opt.out, "Output directory")->required();
  synth->callback([&] {
    action = [&] {
      const data::IngestResult source = data::ingest_csv(synth_opt.input, synth_opt.header);
      const data::EmpiricalDistributions dist = data::fit_distributions(source.matrix);
      const RatingsMatrix sampled =
          data::sample_synthetic(dist, synth_opt.users, dist.n_items(), synth_opt.seed);
      fs::create_directories(synth_opt.out);
      data::write_ratings_csv((fs::path(synth_opt.out) / "ratings.csv").string(), sampled);
      data::write_id_map_csv((fs::path(synth_opt.out) / "item_map.csv").string(), source.item_ids);
      std::printf("sampled %lld ratings for %d users over the fixed %d-item set into %s\n",
                  static_cast<long long>(sampled.nnz()), sampled.n_users(), sampled.n_items(),
                  synth_opt.out.c_str());
    };
  });

  // train -------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Run seeded trainings and write traces/snapshots");
  add_config_support(train);
  TrainOptions train_opt;
  train->add_option("--in", train_opt.input, "Ratings CSV")->required();
  train->add_flag("--header", train_opt.header, "Skip a single header line");
  train->add_option("--algo", train_opt.algo, "Algorithm")
      ->check(CLI::IsMember({"als", "als-ncg"}));
  train->add_option("--lambda", train_opt.spec.config.lambda, "Regularization weight");
  train->add_option("--rank", train_opt.spec.config.n_f, "Factor rank n_f");
  train->add_option("--tol", train_opt.spec.config.tol, "Normalized gradient norm tolerance");
  train->add_option("--max-iters", train_opt.spec.config.max_iters, "Iteration cap");
  train->add_option("--seed", train_opt.spec.config.seed, "Base seed");
  train->add_option("--seeds", train_opt.spec.repetitions, "Runs with seeds seed..seed+N-1");
  train->add_option("--alpha0", train_opt.spec.config.alpha0, "Initial line-search step");
  train->add_option("--armijo-c", train_opt.spec.config.armijo_c, "Sufficient-decrease constant");
  train->add_option("--tau", train_opt.spec.config.tau, "Backtrack shrink factor");
  train->add_option("--max-backtracks", train_opt.spec.config.max_backtracks,
                    "Line-search shrink cap");
  train->add_option("--blocks", train_opt.spec.config.n_blocks,
                    "Partition count (0 = worker count)");
  train->add_option("--workers", train_opt.spec.config.n_workers, "Worker threads");
  train->add_option("--trace-every", train_opt.spec.config.trace_every,
                    "Iterations between trace records");
  train->add_option("--snapshot-every", train_opt.spec.config.snapshot_every,
                    "Model snapshot cadence (0 = off)");
  train->add_flag("--paper-timing", train_opt.spec.config.paper_timing,
                  "Exclude instrumentation from reported times");
  train->add_option("--t", train_opt.spec.top_t, "Ranking cutoff recorded with the experiment");
  train->add_option("--out", train_opt.spec.out_dir, "Output directory")->required();
  train->callback([&] {
    action = [&] { run_train(train_opt); };
  });

  // speedup -----------------------------------------------------------------
  auto* speedup = app.add_subcommand("speedup", "Iterations-to-equal-gradient-norm speedup table");
  add_config_support(speedup);
  struct {
    std::string als_trace, ncg_trace, out;
    double als_time = 0.0;
    double ncg_time = 0.0;
    int window = 2;
  } speedup_opt;
  speedup->add_option("--als", speedup_opt.als_trace, "ALS trace CSV")->required();
  speedup->add_option("--ncg", speedup_opt.ncg_trace, "ALS-NCG trace CSV")->required();
  speedup->add_option("--als-iter-time", speedup_opt.als_time,
                      "Mean seconds per ALS iteration (0 = from trace)");
  speedup->add_option("--ncg-iter-time", speedup_opt.ncg_time,
                      "Mean seconds per ALS-NCG iteration (0 = from trace)");
  speedup->add_option("--window", speedup_opt.window, "Gradient-norm smoothing window");
  speedup->add_option("--out", speedup_opt.out, "Output CSV")->required();
  speedup->callback([&] {
    action = [&] {
      const ConvergenceTrace als_trace = harness::read_trace_csv(speedup_opt.als_trace);
      const ConvergenceTrace ncg_trace = harness::read_trace_csv(speedup_opt.ncg_trace);
      const auto rows = harness::compute_speedup(als_trace, ncg_trace, speedup_opt.als_time,
                                                 speedup_opt.ncg_time, speedup_opt.window);
      harness::write_speedup_csv(speedup_opt.out, rows);
      std::printf("wrote %zu speedup rows to %s\n", rows.size(), speedup_opt.out.c_str());
    };
  });

  // rank-eval ---------------------------------------------------------------
  auto* rank_eval = app.add_subcommand("rank-eval", "Ranking accuracy of snapshots vs a reference");
  add_config_support(rank_eval);
  struct {
    std::string run_dir, algo = "als", reference, out, crossings_out;
    std::uint64_t seed = 0;
    int t = 20;
    int workers = 1;
  } rank_opt;
  rank_eval->add_option("--run-dir", rank_opt.run_dir, "Training output directory")->required();
  rank_eval->add_option("--algo", rank_opt.algo, "Algorithm of the run")
      ->check(CLI::IsMember({"als", "als-ncg"}));
  rank_eval->add_option("--seed", rank_opt.seed, "Seed of the run");
  rank_eval->add_option("--reference", rank_opt.reference,
                        "Reference model snapshot (default: the run's final model)");
  rank_eval->add_option("--t", rank_opt.t, "Top-t ranking cutoff");
  rank_eval->add_option("--workers", rank_opt.workers, "Worker threads");
  rank_eval->add_option("--out", rank_opt.out, "Accuracy table CSV")->required();
  rank_eval->add_option("--crossings-out", rank_opt.crossings_out,
                        "Threshold crossings CSV (default: <out dir>/crossings.csv)");
  rank_eval->callback([&] {
    action = [&] {
      const harness::Algo algo =
          rank_opt.algo == "als" ? harness::Algo::kAls : harness::Algo::kAlsNcg;
      const std::string prefix = harness::run_prefix(algo, rank_opt.seed);
      const harness::RankEvalResult result = harness::cmd_rank_eval_dir(
          rank_opt.run_dir, prefix, rank_opt.reference, rank_opt.t, rank_opt.workers);
      std::string crossings = rank_opt.crossings_out;
      if (crossings.empty())
        crossings = (fs::path(rank_opt.out).parent_path() / "crossings.csv").string();
      harness::write_rank_eval_csv(rank_opt.out, crossings, result);
      for (const harness::Crossing& c : result.crossings) {
        if (c.reached)
          std::printf("%3.0f%% accuracy first reached at iteration %lld (%.3f s)\n",
                      c.threshold * 100.0, static_cast<long long>(c.iter), c.elapsed_s);
        else
          std::printf("%3.0f%% accuracy not reached\n", c.threshold * 100.0);
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    action();
    return 0;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
