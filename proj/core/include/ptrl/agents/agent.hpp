#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ptrl/simenv.hpp"

namespace ptrl::agents {

// Algorithm name plus a hyperparameter assignment using the grid-table
// vocabularies (e.g. {"model": "FFMellowmax", "learning_rate": 0.0001, ...}).
struct AgentConfig {
  std::string algorithm;  // "qlearning" | "dqn" | "a3c"
  nlohmann::json params = nlohmann::json::object();

  static AgentConfig from_json(const nlohmann::json& j);
  static AgentConfig load_file(const std::string& path);
  nlohmann::json to_json() const;
};

// One greedy-evaluation sample of the learning curve.
struct CurvePoint {
  std::int64_t step = 0;
  int permutation = 0;
  double reward = 0;
  std::int64_t actions = 0;
  bool solved = false;
};
using LearningCurve = std::vector<CurvePoint>;

// Exploration-free decision rule used for evaluation. Recurrent policies
// keep per-episode state, hence begin_episode().
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_episode() {}
  virtual int act(const simenv::AttackEnv& env) = 0;
};

struct TrainOptions {
  std::int64_t total_steps = 0;
  std::uint64_t seed = 0;
  std::int64_t eval_interval = 10000;  // greedy-eval cadence (steps)
  // Stop once a periodic evaluation solves at least this many permutations
  // (-1: run the full budget).
  int early_stop_solved = -1;
};

struct TrainOutput {
  nlohmann::json checkpoint;  // self-contained: algorithm, config, parameters
  LearningCurve curve;
  std::int64_t steps_run = 0;
};

// Trains the configured algorithm against the pool and returns the
// checkpoint plus learning curve. Q-learning and DQN are single-threaded and
// bit-deterministic for a fixed seed; the asynchronous trainer is not.
TrainOutput train_agent(const AgentConfig& config,
                        const simenv::EnvironmentPool& pool,
                        const TrainOptions& options);

// Rebuilds a greedy policy from a train_agent checkpoint.
std::unique_ptr<Policy> policy_from_checkpoint(const nlohmann::json& checkpoint);

void save_checkpoint_file(const std::string& path,
                          const nlohmann::json& checkpoint);
nlohmann::json load_checkpoint_file(const std::string& path);

}  // namespace ptrl::agents
