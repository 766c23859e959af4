#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptrl/harness/evaluate.hpp"
#include "ptrl/harness/grid.hpp"
#include "ptrl/simenv.hpp"

namespace ptrl::harness {

// Which environments a stage trains and evaluates on.
struct StageSpec {
  std::vector<scenario::Scenario> scenarios;
  std::optional<std::vector<int>> permutations;  // per scenario; all if unset

  simenv::EnvironmentPool make_pool() const;
  std::string label() const;
};

struct SearchOptions {
  std::int64_t steps = 100000;
  int parallelism = 1;
  std::uint64_t seed = 0;
  std::string out_dir;       // empty: keep results in memory only
  bool resume = false;       // continue from out_dir/results.jsonl
  std::int64_t eval_interval = 10000;
  int early_stop_solved = -1;
  size_t max_jobs = static_cast<size_t>(-1);  // cap for tests / smoke runs
};

struct RankedResult {
  size_t config_index = 0;
  agents::AgentConfig config;
  EvalReport report;
};

struct SearchResult {
  std::vector<RankedResult> ranked;  // best first
};

// Trains every grid configuration against the stage pool, evaluates greedily
// on all stage permutations and ranks by (solve fraction desc, avg reward
// desc, avg actions asc, config index asc). With out_dir set, each finished
// job appends to results.jsonl so an interrupted search resumes without
// retraining; the manifest's grid hash guards against resuming a different
// search.
SearchResult grid_search(const HyperGrid& grid, const StageSpec& stage,
                         const SearchOptions& options);

// Generalization sweep: train on k = start_size, start_size+1, ... train
// permutations until the trained agent solves all 24; on failure the lowest
// unsolved held-out permutation moves into the train set.
struct Stage3Options {
  std::int64_t steps = 500000;
  std::uint64_t seed = 0;
  int start_size = 12;
  std::int64_t eval_interval = 10000;
};

struct Stage3Attempt {
  SplitSpec split;
  EvalReport report;  // over all 24 permutations
};

struct Stage3Result {
  int minimal_train_size = -1;  // -1: still unsolved at 24
  std::vector<Stage3Attempt> attempts;
};

// `train_and_eval` maps a split to a greedy evaluation over all 24
// permutations; the default (nullptr) trains `config` for `steps` per
// attempt. Injectable for tests.
using SplitTrainer = std::function<EvalReport(const SplitSpec&)>;

Stage3Result stage3_split_search(const scenario::Scenario& s,
                                 const agents::AgentConfig& config,
                                 const Stage3Options& options,
                                 SplitTrainer train_and_eval = nullptr);

}  // namespace ptrl::harness
