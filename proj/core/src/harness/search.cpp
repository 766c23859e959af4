#include "ptrl/harness/search.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "ptrl/harness/persist.hpp"
#include "ptrl/rng.hpp"

namespace ptrl::harness {

simenv::EnvironmentPool StageSpec::make_pool() const {
  if (scenarios.empty()) {
    throw std::invalid_argument("stage needs at least one scenario");
  }
  std::vector<scenario::Scenario> perms;
  for (const auto& s : scenarios) {
    auto all = scenario::enumerate_permutations(s);
    if (permutations) {
      for (int id : *permutations) perms.push_back(all.at(id));
    } else {
      perms.insert(perms.end(), all.begin(), all.end());
    }
  }
  return simenv::EnvironmentPool(std::move(perms));
}

std::string StageSpec::label() const {
  std::string out;
  for (const auto& s : scenarios) out += s.name;
  if (permutations) {
    out += ":";
    for (int id : *permutations) out += std::to_string(id) + ",";
  }
  return out;
}

namespace {

bool rank_less(const RankedResult& a, const RankedResult& b) {
  if (a.report.solve_fraction() != b.report.solve_fraction()) {
    return a.report.solve_fraction() > b.report.solve_fraction();
  }
  if (a.report.avg_reward() != b.report.avg_reward()) {
    return a.report.avg_reward() > b.report.avg_reward();
  }
  if (a.report.avg_actions() != b.report.avg_actions()) {
    return a.report.avg_actions() < b.report.avg_actions();
  }
  return a.config_index < b.config_index;
}

std::string grid_fingerprint(const HyperGrid& grid, const StageSpec& stage,
                             const SearchOptions& options) {
  const std::string blob = grid.to_json().dump() + "|" + stage.label() + "|" +
                           std::to_string(options.steps) + "|" +
                           std::to_string(options.seed);
  return to_hex(fnv1a(blob));
}

}  // namespace

SearchResult grid_search(const HyperGrid& grid, const StageSpec& stage,
                         const SearchOptions& options) {
  if (options.steps <= 0) {
    throw std::invalid_argument("grid search needs steps > 0");
  }
  const size_t total = grid.size();
  const std::string fingerprint = grid_fingerprint(grid, stage, options);

  std::set<size_t> done;
  std::vector<RankedResult> results;
  std::filesystem::path results_path;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    results_path = std::filesystem::path(options.out_dir) / "results.jsonl";
    const auto manifest_path =
        std::filesystem::path(options.out_dir) / "search_manifest.json";
    if (options.resume && std::filesystem::exists(manifest_path)) {
      const auto manifest = read_manifest(manifest_path.string());
      if (manifest.value("grid_hash", "") != fingerprint) {
        throw std::runtime_error(
            "resume checkpoint belongs to a different search (grid hash "
            "mismatch)");
      }
      if (std::filesystem::exists(results_path)) {
        std::ifstream in(results_path);
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          const auto j = nlohmann::json::parse(line);
          RankedResult r;
          r.config_index = j.at("index").get<size_t>();
          r.config = agents::AgentConfig::from_json(j.at("config"));
          r.report = EvalReport::from_json(j.at("report"));
          if (done.insert(r.config_index).second) {
            results.push_back(std::move(r));
          }
        }
      }
    } else {
      nlohmann::json manifest{{"grid_hash", fingerprint},
                              {"grid", grid.to_json()},
                              {"stage", stage.label()},
                              {"steps", options.steps},
                              {"seed", options.seed},
                              {"environment_version",
                               environment_version_hash()}};
      write_manifest(manifest_path.string(), manifest);
      std::ofstream(results_path, std::ios::trunc);  // start fresh
    }
  }

  std::vector<size_t> pending;
  for (size_t i = 0; i < total; ++i) {
    if (!done.contains(i)) pending.push_back(i);
  }
  if (pending.size() > options.max_jobs) pending.resize(options.max_jobs);

  std::mutex mu;
  size_t cursor = 0;
  auto run_jobs = [&]() {
    while (true) {
      size_t index;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (cursor >= pending.size()) return;
        index = pending[cursor++];
      }
      RankedResult r;
      r.config_index = index;
      r.config = grid.config_at(index);
      auto pool = stage.make_pool();
      agents::TrainOptions topt;
      topt.total_steps = options.steps;
      topt.seed = mix_seed(options.seed, index);
      topt.eval_interval = options.eval_interval;
      topt.early_stop_solved = options.early_stop_solved;
      const auto trained = agents::train_agent(r.config, pool, topt);
      auto policy = agents::policy_from_checkpoint(trained.checkpoint);
      r.report = evaluate(*policy, pool);
      r.report.label = r.config.algorithm + "#" + std::to_string(index);
      {
        std::lock_guard<std::mutex> lock(mu);
        if (!results_path.empty()) {
          std::ofstream out(results_path, std::ios::app);
          out << nlohmann::json{{"index", index},
                                {"config", r.config.to_json()},
                                {"report", r.report.to_json()}}
                     .dump()
              << "\n";
        }
        results.push_back(std::move(r));
      }
    }
  };

  const int workers = std::max(1, options.parallelism);
  if (workers == 1) {
    run_jobs();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < workers; ++i) threads.emplace_back(run_jobs);
    for (auto& t : threads) t.join();
  }

  SearchResult out;
  out.ranked = std::move(results);
  std::sort(out.ranked.begin(), out.ranked.end(), rank_less);
  if (!options.out_dir.empty()) {
    write_ranked_csv(
        (std::filesystem::path(options.out_dir) / "ranked.csv").string(), out);
  }
  return out;
}

Stage3Result stage3_split_search(const scenario::Scenario& s,
                                 const agents::AgentConfig& config,
                                 const Stage3Options& options,
                                 SplitTrainer train_and_eval) {
  if (!train_and_eval) {
    train_and_eval = [&](const SplitSpec& split) {
      auto all = scenario::enumerate_permutations(s);
      std::vector<scenario::Scenario> train_perms;
      for (int id : split.train_ids) train_perms.push_back(all.at(id));
      simenv::EnvironmentPool train_pool(std::move(train_perms));
      agents::TrainOptions topt;
      topt.total_steps = options.steps;
      topt.seed = options.seed;
      topt.eval_interval = options.eval_interval;
      const auto trained = agents::train_agent(config, train_pool, topt);
      auto policy = agents::policy_from_checkpoint(trained.checkpoint);
      simenv::EnvironmentPool full_pool(std::move(all));
      auto report = evaluate(*policy, full_pool);
      report.scenario = s.name;
      return report;
    };
  }

  Stage3Result result;
  SplitSpec split = SplitSpec::make(s.name, options.seed, options.start_size);
  while (true) {
    EvalReport report = train_and_eval(split);
    result.attempts.push_back(Stage3Attempt{split, report});
    if (report.solved_count() == static_cast<int>(report.rows.size())) {
      result.minimal_train_size = static_cast<int>(split.train_ids.size());
      return result;
    }
    if (split.test_ids.empty()) return result;  // 24/24 trained, still failing

    // Move the lowest unsolved held-out permutation into the train set (or
    // the first held-out one if the failures are all in the train set).
    int moved = split.test_ids.front();
    for (const auto& row : report.rows) {
      if (!row.solved &&
          std::find(split.test_ids.begin(), split.test_ids.end(),
                    row.permutation) != split.test_ids.end()) {
        moved = row.permutation;
        break;
      }
    }
    split.test_ids.erase(
        std::find(split.test_ids.begin(), split.test_ids.end(), moved));
    split.train_ids.push_back(moved);
    std::sort(split.train_ids.begin(), split.train_ids.end());
    split.validate();
  }
}

}  // namespace ptrl::harness
