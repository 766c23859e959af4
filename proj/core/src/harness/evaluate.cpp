#include "ptrl/harness/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ptrl::harness {

int EvalReport::solved_count() const {
  int n = 0;
  for (const auto& r : rows) n += r.solved ? 1 : 0;
  return n;
}

double EvalReport::solve_fraction() const {
  return rows.empty() ? 0.0 : static_cast<double>(solved_count()) / rows.size();
}

double EvalReport::avg_reward() const {
  if (rows.empty()) return 0;
  double sum = 0;
  for (const auto& r : rows) sum += r.reward;
  return sum / rows.size();
}

double EvalReport::avg_actions() const {
  if (rows.empty()) return 0;
  double sum = 0;
  for (const auto& r : rows) sum += static_cast<double>(r.actions);
  return sum / rows.size();
}

double EvalReport::min_reward() const {
  double m = rows.empty() ? 0 : rows.front().reward;
  for (const auto& r : rows) m = std::min(m, r.reward);
  return m;
}

double EvalReport::max_reward() const {
  double m = rows.empty() ? 0 : rows.front().reward;
  for (const auto& r : rows) m = std::max(m, r.reward);
  return m;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back(nlohmann::json{{"permutation", r.permutation},
                                       {"solved", r.solved},
                                       {"reward", r.reward},
                                       {"actions", r.actions}});
  }
  return nlohmann::json{{"label", label},
                        {"scenario", scenario},
                        {"rows", rows_json},
                        {"aggregates",
                         {{"solved", solved_count()},
                          {"solve_fraction", solve_fraction()},
                          {"avg_reward", avg_reward()},
                          {"avg_actions", avg_actions()},
                          {"min_reward", min_reward()},
                          {"max_reward", max_reward()}}}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  EvalReport r;
  r.label = j.value("label", "");
  r.scenario = j.value("scenario", "");
  for (const auto& row : j.at("rows")) {
    r.rows.push_back(EvalRow{row.at("permutation").get<int>(),
                             row.at("solved").get<bool>(),
                             row.at("reward").get<double>(),
                             row.at("actions").get<std::int64_t>()});
  }
  return r;
}

EvalReport EvalReport::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read report '" + path + "'");
  nlohmann::json j;
  f >> j;
  return from_json(j);
}

void EvalReport::save_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write report '" + path + "'");
  f << to_json().dump(2) << "\n";
}

EvalReport evaluate(agents::Policy& policy, const simenv::EnvironmentPool& pool,
                    const std::vector<int>* subset,
                    const std::string& trace_dir) {
  EvalReport report;
  report.scenario = pool.permutation(0).name;
  std::vector<int> ids;
  if (subset != nullptr) {
    ids = *subset;
  } else {
    ids.resize(pool.size());
    std::iota(ids.begin(), ids.end(), 0);
  }
  for (int p : ids) {
    auto env = pool.make_env(static_cast<size_t>(p));
    policy.begin_episode();
    simenv::TraceWriter trace;
    EvalRow row;
    row.permutation = p;
    while (!env.done()) {
      const int a = policy.act(env);
      const auto out = env.step(a);
      row.reward += out.reward;
      row.actions += 1;
      if (!trace_dir.empty()) {
        trace.record(static_cast<int>(row.actions), a, env.catalog(),
                     out.reward, out.done);
      }
    }
    row.solved = env.solved();
    report.rows.push_back(row);
    if (!trace_dir.empty()) {
      trace.write_file(trace_dir + "/trace_" + env.scenario().name + "_" +
                       std::to_string(p) + ".csv");
    }
  }
  return report;
}

void SplitSpec::validate() const {
  std::vector<bool> seen(24, false);
  for (int id : train_ids) {
    if (id < 0 || id >= 24 || seen[id]) {
      throw std::invalid_argument("invalid or duplicate train permutation id");
    }
    seen[id] = true;
  }
  for (int id : test_ids) {
    if (id < 0 || id >= 24 || seen[id]) {
      throw std::invalid_argument(
          "test id duplicated or overlapping the train set");
    }
    seen[id] = true;
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("split does not cover all 24 ids");
  }
}

SplitSpec SplitSpec::make(const std::string& scenario, std::uint64_t seed,
                          int train_size) {
  if (train_size < 0 || train_size > 24) {
    throw std::invalid_argument("train size must be in 0..24");
  }
  std::vector<int> ids(24);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  SplitSpec split;
  split.scenario = scenario;
  split.seed = seed;
  split.train_ids.assign(ids.begin(), ids.begin() + train_size);
  split.test_ids.assign(ids.begin() + train_size, ids.end());
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  split.validate();
  return split;
}

}  // namespace ptrl::harness
