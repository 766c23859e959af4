#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptrl/agents/agent.hpp"
#include "ptrl/simenv.hpp"

namespace ptrl::harness {

struct EvalRow {
  int permutation = 0;
  bool solved = false;
  double reward = 0;
  std::int64_t actions = 0;
};

// Greedy evaluation over a permutation set: one exploration-free episode per
// permutation plus the aggregate means and extremes.
struct EvalReport {
  std::string label;     // e.g. scenario name or config description
  std::string scenario;  // scenario name for comparisons
  std::vector<EvalRow> rows;

  int solved_count() const;
  double solve_fraction() const;
  double avg_reward() const;
  double avg_actions() const;
  double min_reward() const;
  double max_reward() const;

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
  static EvalReport load_file(const std::string& path);
  void save_file(const std::string& path) const;
};

// Runs one greedy episode per pool permutation (or per listed subset).
// Optionally writes per-permutation traces as
// `<trace_dir>/trace_<scenario>_<perm>.csv`.
EvalReport evaluate(agents::Policy& policy, const simenv::EnvironmentPool& pool,
                    const std::vector<int>* subset = nullptr,
                    const std::string& trace_dir = "");

// Train/test partition of the 24 permutation ids.
struct SplitSpec {
  std::string scenario;
  std::vector<int> train_ids;
  std::vector<int> test_ids;
  std::uint64_t seed = 0;

  void validate() const;  // union = 0..23, intersection empty

  // Seeded shuffle of 0..23 with the first `train_size` ids as the train
  // set.
  static SplitSpec make(const std::string& scenario, std::uint64_t seed,
                        int train_size);
};

}  // namespace ptrl::harness
