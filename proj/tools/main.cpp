// Command line front end: train agents, evaluate checkpoints, run grid
// searches, the scripted baseline, the optimal-path search and comparisons.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "ptrl/agents/agent.hpp"
#include "ptrl/baseline.hpp"
#include "ptrl/harness/evaluate.hpp"
#include "ptrl/harness/grid.hpp"
#include "ptrl/harness/oracle.hpp"
#include "ptrl/harness/persist.hpp"
#include "ptrl/harness/search.hpp"
#include "ptrl/scenario_io.hpp"
#include "ptrl/simenv.hpp"

namespace {

using namespace ptrl;

scenario::Scenario resolve_scenario(const std::string& ref) {
  if (auto preset = scenario::preset_by_name(ref)) return *preset;
  return scenario::load_scenario_file(ref);
}

std::vector<scenario::Scenario> resolve_scenarios(
    const std::vector<std::string>& refs) {
  std::vector<scenario::Scenario> out;
  for (const auto& r : refs) out.push_back(resolve_scenario(r));
  return out;
}

std::optional<std::vector<int>> parse_permutations(const std::string& spec) {
  if (spec.empty() || spec == "all") return std::nullopt;
  std::vector<int> ids;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    ids.push_back(std::stoi(item));
  }
  return ids;
}

void write_train_outputs(const std::string& out_dir,
                         const agents::AgentConfig& config,
                         const agents::TrainOutput& trained,
                         const harness::EvalReport& report,
                         std::uint64_t seed, std::int64_t steps) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  agents::save_checkpoint_file((dir / "checkpoint.json").string(),
                               trained.checkpoint);
  harness::write_curve_csv((dir / "curve.csv").string(), trained.curve);
  report.save_file((dir / "eval.json").string());
  harness::write_manifest(
      (dir / "manifest.json").string(),
      nlohmann::json{{"config", config.to_json()},
                     {"seed", seed},
                     {"steps_requested", steps},
                     {"steps_run", trained.steps_run},
                     {"environment_version",
                      harness::environment_version_hash()}});
}

int cmd_train(const std::string& config_path, const std::string& scenario_ref,
              const std::string& permutations, bool stage2, std::int64_t steps,
              std::uint64_t seed, std::int64_t eval_interval,
              const std::string& out_dir) {
  const auto config = agents::AgentConfig::load_file(config_path);
  harness::StageSpec stage;
  if (stage2) {
    stage.scenarios = resolve_scenarios({"a", "b", "c"});
  } else {
    stage.scenarios = {resolve_scenario(scenario_ref)};
    stage.permutations = parse_permutations(permutations);
  }
  auto pool = stage.make_pool();
  agents::TrainOptions options;
  options.total_steps = steps;
  options.seed = seed;
  options.eval_interval = eval_interval;
  const auto trained = agents::train_agent(config, pool, options);
  auto policy = agents::policy_from_checkpoint(trained.checkpoint);
  auto report = harness::evaluate(*policy, pool);
  report.label = config.algorithm;
  std::cout << "trained " << config.algorithm << " for " << trained.steps_run
            << " steps; greedy: " << report.solved_count() << "/"
            << report.rows.size() << " solved, avg reward "
            << report.avg_reward() << ", avg actions " << report.avg_actions()
            << "\n";
  if (!out_dir.empty()) {
    write_train_outputs(out_dir, config, trained, report, seed, steps);
    std::cout << "outputs in " << out_dir << "\n";
  }
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path,
                 const std::string& scenario_ref,
                 const std::string& permutations, const std::string& traces,
                 const std::string& out_path) {
  const auto checkpoint = agents::load_checkpoint_file(checkpoint_path);
  auto policy = agents::policy_from_checkpoint(checkpoint);
  auto pool = simenv::EnvironmentPool::stage1(resolve_scenario(scenario_ref));
  const auto subset = parse_permutations(permutations);
  if (!traces.empty()) std::filesystem::create_directories(traces);
  auto report = harness::evaluate(*policy, pool,
                                  subset ? &*subset : nullptr, traces);
  report.label = checkpoint.at("algorithm").get<std::string>();
  std::cout << report.to_json().dump(2) << "\n";
  if (!out_path.empty()) report.save_file(out_path);
  return 0;
}

int cmd_grid(const std::string& grid_path, const std::string& scenario_ref,
             const std::string& permutations, bool stage2, std::int64_t steps,
             int parallelism, std::uint64_t seed, const std::string& out_dir,
             bool resume, std::int64_t max_jobs) {
  const auto grid = harness::HyperGrid::load_file(grid_path);
  harness::StageSpec stage;
  if (stage2) {
    stage.scenarios = resolve_scenarios({"a", "b", "c"});
  } else {
    stage.scenarios = {resolve_scenario(scenario_ref)};
    stage.permutations = parse_permutations(permutations);
  }
  harness::SearchOptions options;
  options.steps = steps;
  options.parallelism = parallelism;
  options.seed = seed;
  options.out_dir = out_dir;
  options.resume = resume;
  if (max_jobs >= 0) options.max_jobs = static_cast<size_t>(max_jobs);
  const auto result = harness::grid_search(grid, stage, options);
  std::cout << "grid " << grid.algorithm() << ": " << result.ranked.size()
            << "/" << grid.size() << " configs evaluated\n";
  const size_t show = std::min<size_t>(result.ranked.size(), 10);
  for (size_t i = 0; i < show; ++i) {
    const auto& r = result.ranked[i];
    std::cout << "  #" << i + 1 << " config " << r.config_index << ": "
              << r.report.solved_count() << "/" << r.report.rows.size()
              << " solved, avg reward " << r.report.avg_reward()
              << ", avg actions " << r.report.avg_actions() << "\n";
  }
  return 0;
}

int cmd_baseline(const std::vector<std::string>& scenario_refs,
                 const std::string& chain_path, const std::string& out_dir) {
  const auto chain = chain_path.empty() ? baseline::default_chain()
                                        : baseline::load_chain_file(chain_path);
  std::vector<baseline::BaselineResult> results;
  for (const auto& s : resolve_scenarios(scenario_refs)) {
    results.push_back(baseline::run_baseline_all(s, chain));
  }
  const auto table = harness::compare(results, {});
  std::cout << table.to_text();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (const auto& r : results) {
      std::ofstream f(std::filesystem::path(out_dir) /
                      ("baseline_" + r.scenario + ".json"));
      f << harness::baseline_result_to_json(r).dump(2) << "\n";
    }
  }
  return 0;
}

int cmd_oracle(const std::vector<std::string>& scenario_refs,
               const std::string& out_path, const std::string& reference_path) {
  std::map<std::string, harness::ReferenceAnchor> anchors;
  if (!reference_path.empty()) {
    anchors = harness::load_reference_anchors(reference_path);
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : resolve_scenarios(scenario_refs)) {
    const auto report = harness::oracle_all_permutations(s);
    const auto& rep = report.representative();
    std::cout << "scenario " << s.name << ": max reward " << rep.max_reward
              << ", min actions " << rep.min_actions
              << ", permutation invariant "
              << (report.permutation_invariant() ? "yes" : "NO") << "\n";
    if (auto it = anchors.find(s.name); it != anchors.end()) {
      std::cout << "  reference (" << it->second.max_reward << ", "
                << it->second.min_actions << "), delta ("
                << rep.max_reward - it->second.max_reward << ", "
                << rep.min_actions - it->second.min_actions << ")\n";
    }
    out.push_back(harness::oracle_report_to_json(report));
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << out.dump(2) << "\n";
  }
  return 0;
}

int cmd_compare(const std::vector<std::string>& baseline_paths,
                const std::vector<std::string>& agent_specs,
                const std::string& oracle_path,
                const std::string& reference_path) {
  std::vector<baseline::BaselineResult> baselines;
  for (const auto& p : baseline_paths) {
    std::ifstream f(p);
    if (!f) throw std::runtime_error("cannot read baseline result '" + p + "'");
    nlohmann::json j;
    f >> j;
    baselines.push_back(harness::baseline_result_from_json(j));
  }
  std::vector<std::pair<std::string, harness::EvalReport>> agent_reports;
  for (const auto& spec : agent_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("agent spec must be label=report.json");
    }
    agent_reports.emplace_back(
        spec.substr(0, eq),
        harness::EvalReport::load_file(spec.substr(eq + 1)));
  }
  std::vector<harness::OracleScenarioReport> oracles;
  if (!oracle_path.empty()) {
    std::ifstream f(oracle_path);
    if (!f) throw std::runtime_error("cannot read oracle file");
    nlohmann::json j;
    f >> j;
    for (const auto& item : j) {
      oracles.push_back(harness::oracle_report_from_json(item));
    }
  }
  std::map<std::string, harness::ReferenceAnchor> anchors;
  if (!reference_path.empty()) {
    anchors = harness::load_reference_anchors(reference_path);
  }
  const auto table = harness::compare(
      baselines, agent_reports, oracles.empty() ? nullptr : &oracles,
      anchors.empty() ? nullptr : &anchors);
  std::cout << table.to_text();
  return 0;
}

int cmd_split_search(const std::string& scenario_ref,
                     const std::string& config_path, std::int64_t steps,
                     std::uint64_t seed, int start_size,
                     const std::string& out_dir) {
  const auto s = resolve_scenario(scenario_ref);
  const auto config = agents::AgentConfig::load_file(config_path);
  harness::Stage3Options options;
  options.steps = steps;
  options.seed = seed;
  options.start_size = start_size;
  const auto result = harness::stage3_split_search(s, config, options);
  for (const auto& attempt : result.attempts) {
    std::cout << "train size " << attempt.split.train_ids.size() << ": "
              << attempt.report.solved_count() << "/24 solved\n";
  }
  if (result.minimal_train_size >= 0) {
    std::cout << "all 24 permutations solved from a train set of "
              << result.minimal_train_size << "\n";
  } else {
    std::cout << "not solved even when training on all 24 permutations\n";
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json attempts = nlohmann::json::array();
    for (const auto& a : result.attempts) {
      attempts.push_back(nlohmann::json{{"train_ids", a.split.train_ids},
                                        {"test_ids", a.split.test_ids},
                                        {"report", a.report.to_json()}});
    }
    harness::write_manifest(
        (std::filesystem::path(out_dir) / "split_search.json").string(),
        nlohmann::json{{"minimal_train_size", result.minimal_train_size},
                       {"attempts", attempts}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network attack simulation workbench"};
  app.require_subcommand(1);

  // train
  std::string config_path, scenario_ref = "a", permutations = "all";
  std::string out_dir, traces, checkpoint_path, chain_path, grid_path;
  std::string oracle_out, reference_path, report_out, oracle_path;
  std::vector<std::string> scenario_refs{"a", "b", "c"};
  std::vector<std::string> baseline_paths, agent_specs;
  bool stage2 = false, resume = false;
  std::int64_t steps = 100000, eval_interval = 10000, max_jobs = -1;
  std::uint64_t seed = 0;
  int parallelism = 1, start_size = 12;

  auto* train = app.add_subcommand("train", "train one agent configuration");
  train->add_option("--config", config_path, "agent config JSON")->required();
  train->add_option("--scenario", scenario_ref, "a|b|c or a scenario file");
  train->add_option("--permutations", permutations,
                    "all or a comma list of permutation ids");
  train->add_flag("--stage2", stage2, "all 72 permutations of A, B and C");
  train->add_option("--steps", steps, "training step budget");
  train->add_option("--seed", seed, "run seed");
  train->add_option("--eval-interval", eval_interval,
                    "greedy evaluation cadence in steps");
  train->add_option("--out", out_dir, "output directory");

  auto* eval = app.add_subcommand("evaluate", "greedy-evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")
      ->required();
  eval->add_option("--scenario", scenario_ref, "a|b|c or a scenario file");
  eval->add_option("--permutations", permutations,
                   "all or a comma list of permutation ids");
  eval->add_option("--traces", traces, "directory for episode trace CSVs");
  eval->add_option("--out", report_out, "write the report JSON here");

  auto* grid = app.add_subcommand("grid", "hyperparameter grid search");
  grid->add_option("--grid", grid_path, "grid JSON file")->required();
  grid->add_option("--scenario", scenario_ref, "a|b|c or a scenario file");
  grid->add_option("--permutations", permutations,
                   "all or a comma list of permutation ids");
  grid->add_flag("--stage2", stage2, "all 72 permutations of A, B and C");
  grid->add_option("--steps", steps, "training steps per configuration");
  grid->add_option("--parallelism", parallelism, "concurrent training jobs");
  grid->add_option("--seed", seed, "run seed");
  grid->add_option("--out", out_dir, "results directory")->required();
  grid->add_flag("--resume", resume, "continue an interrupted search");
  grid->add_option("--max-jobs", max_jobs,
                   "train at most this many configs (smoke runs)");

  auto* base = app.add_subcommand("baseline", "run the decision-chain agent");
  base->add_option("--scenarios", scenario_refs, "scenario list")
      ->delimiter(',');
  base->add_option("--chain", chain_path, "execution chain file");
  base->add_option("--out", out_dir, "output directory");

  auto* orc = app.add_subcommand("oracle", "exact optimum per scenario");
  orc->add_option("--scenarios", scenario_refs, "scenario list")
      ->delimiter(',');
  orc->add_option("--out", oracle_out, "write oracle JSON here");
  orc->add_option("--reference", reference_path,
                  "reference anchors JSON for delta reporting");

  auto* cmp = app.add_subcommand("compare", "comparison table");
  cmp->add_option("--baseline", baseline_paths, "baseline result JSONs")
      ->required();
  cmp->add_option("--agent", agent_specs, "label=report.json entries");
  cmp->add_option("--oracle", oracle_path, "oracle JSON from `oracle --out`");
  cmp->add_option("--reference", reference_path, "reference anchors JSON");

  auto* split = app.add_subcommand(
      "split-search", "smallest train set that solves all 24 permutations");
  split->add_option("--scenario", scenario_ref, "a|b|c or a scenario file")
      ->required();
  split->add_option("--config", config_path, "agent config JSON")->required();
  split->add_option("--steps", steps, "training steps per attempt");
  split->add_option("--seed", seed, "run seed");
  split->add_option("--start", start_size, "initial train set size");
  split->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      return cmd_train(config_path, scenario_ref, permutations, stage2, steps,
                       seed, eval_interval, out_dir);
    }
    if (eval->parsed()) {
      return cmd_evaluate(checkpoint_path, scenario_ref, permutations, traces,
                          report_out);
    }
    if (grid->parsed()) {
      return cmd_grid(grid_path, scenario_ref, permutations, stage2, steps,
                      parallelism, seed, out_dir, resume, max_jobs);
    }
    if (base->parsed()) {
      return cmd_baseline(scenario_refs, chain_path, out_dir);
    }
    if (orc->parsed()) {
      return cmd_oracle(scenario_refs, oracle_out, reference_path);
    }
    if (cmp->parsed()) {
      return cmd_compare(baseline_paths, agent_specs, oracle_path,
                         reference_path);
    }
    if (split->parsed()) {
      return cmd_split_search(scenario_ref, config_path, steps, seed,
                              start_size, out_dir);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
