#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptrl/agents/agent.hpp"
#include "ptrl/agents/schedule.hpp"
#include "ptrl/simenv.hpp"

namespace ptrl::agents {

// Tabular action-value store keyed by the canonical knowledge fingerprint.
// Unseen states read as all-zero value vectors.
class QTable {
 public:
  explicit QTable(int action_count) : action_count_(action_count) {}

  int action_count() const { return action_count_; }
  size_t state_count() const { return table_.size(); }

  // Mutable row, inserting zeros on first touch.
  std::vector<double>& row(const std::string& key);
  // Read-only row; zeros if unseen.
  std::vector<double> values(const std::string& key) const;
  const std::vector<double>* find(const std::string& key) const;

  nlohmann::json to_json() const;  // keys sorted for stable output
  static QTable from_json(const nlohmann::json& j);

 private:
  int action_count_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

// Q(s,a) <- Q(s,a) + alpha * (r + gamma * max_x Q(s',x) - Q(s,a)).
// Passing next_state == nullptr marks a terminal transition (no bootstrap).
// Returns the updated value.
double q_update(QTable& table, const std::string& state, int action, double reward,
                const std::string* next_state, double alpha, double gamma);

struct QLearningConfig {
  double learning_rate = 0.1;
  double final_epsilon = 0.01;
  std::int64_t exploration_steps = 80000;
  double gamma = 0.9;

  static QLearningConfig from_params(const nlohmann::json& params);
  nlohmann::json to_params() const;
};

TrainOutput train_qlearning(const QLearningConfig& config,
                            const simenv::EnvironmentPool& pool,
                            const TrainOptions& options);

class QTablePolicy : public Policy {
 public:
  explicit QTablePolicy(QTable table) : table_(std::move(table)) {}
  int act(const simenv::AttackEnv& env) override;
  const QTable& table() const { return table_; }

 private:
  QTable table_;
};

}  // namespace ptrl::agents
