#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ptrl/agents/agent.hpp"
#include "ptrl/nnkit/lstm.hpp"
#include "ptrl/nnkit/mlp.hpp"
#include "ptrl/nnkit/optim.hpp"
#include "ptrl/simenv.hpp"

namespace ptrl::agents {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0;
  std::vector<double> next_state;
  bool done = false;
};

// Bounded ring of transitions, oldest-first eviction, uniform sampling with
// replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void push(Transition t);
  size_t size() const { return ring_.size(); }
  size_t capacity() const { return capacity_; }
  const Transition& sample(std::mt19937_64& rng) const;
  const Transition& at(size_t i) const { return ring_.at(i); }

 private:
  size_t capacity_;
  size_t write_ = 0;
  std::vector<Transition> ring_;
};

struct DqnConfig {
  bool recurrent = false;  // FCLSTMStateQFunction instead of the plain net
  int hidden_layers = 2;
  int hidden_size = 50;
  double learning_rate = 1e-4;
  double final_epsilon = 0.1;
  std::int64_t exploration_steps = 60000;
  size_t replay_capacity = 1000;
  double gamma = 0.7;
  std::int64_t target_update_interval = 1000;
  std::int64_t update_interval = 1;
  size_t replay_start_size = 1000;
  int batch_size = 32;
  bool grad_clip = false;
  double grad_clip_norm = 10.0;

  static DqnConfig from_params(const nlohmann::json& params);
  nlohmann::json to_params() const;
};

// TD(0) target: y = r + gamma * (1 - done) * max_a q_next[a].
inline double dqn_target(double reward, bool done, double gamma,
                         std::span<const double> next_q) {
  if (done) return reward;
  double best = next_q[0];
  for (double q : next_q) best = q > best ? q : best;
  return reward + gamma * best;
}

// Step-wise feedforward DQN trainer. One call to step() performs one
// environment interaction plus whatever replay updates and target syncs fall
// on that step; exposed so tests can watch the online/target networks.
class DqnTrainer {
 public:
  DqnTrainer(const DqnConfig& config, const simenv::EnvironmentPool& pool,
             std::uint64_t seed);

  void step();
  std::int64_t steps_done() const { return steps_; }

  const nnkit::Mlp& online() const { return online_; }
  const nnkit::Mlp& target() const { return target_; }
  const ReplayBuffer& replay() const { return replay_; }
  std::int64_t gradient_steps() const { return gradient_steps_; }

 private:
  DqnConfig config_;
  simenv::EnvironmentPool pool_;
  nnkit::Mlp online_;
  nnkit::Mlp target_;
  nnkit::OptimizerState adam_;
  ReplayBuffer replay_;
  std::mt19937_64 rng_;
  simenv::AttackEnv env_;
  std::vector<double> obs_;
  std::int64_t steps_ = 0;
  std::int64_t gradient_steps_ = 0;
};

TrainOutput train_dqn(const DqnConfig& config,
                      const simenv::EnvironmentPool& pool,
                      const TrainOptions& options);

class DqnPolicy : public Policy {
 public:
  DqnPolicy(DqnConfig config, const nlohmann::json& checkpoint_payload);
  void begin_episode() override;
  int act(const simenv::AttackEnv& env) override;

 private:
  DqnConfig config_;
  std::unique_ptr<nnkit::Mlp> net_;
  std::unique_ptr<nnkit::RecurrentQNet> rnet_;
  nnkit::RecurrentQNet::State rstate_;
};

}  // namespace ptrl::agents
