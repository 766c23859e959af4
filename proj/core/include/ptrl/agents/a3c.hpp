#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <vector>

#include "ptrl/agents/agent.hpp"
#include "ptrl/nnkit/mlp.hpp"
#include "ptrl/nnkit/policy.hpp"
#include "ptrl/nnkit/store.hpp"
#include "ptrl/simenv.hpp"

namespace ptrl::agents {

struct A3cConfig {
  nnkit::PolicyKind model = nnkit::PolicyKind::Softmax;
  double omega = 1.0;        // mellowmax sharpness (not in the search grid)
  double learning_rate = 1e-4;
  double final_epsilon = 0.01;  // uniform-action floor during training
  double reward_scale = 0.01;
  double beta = 0.01;        // entropy bonus coefficient
  double gamma = 0.99;
  double alpha = 0.99;       // shared RMSProp decay

  int t_max = 5;
  int workers = 24;
  int hidden_layers = 2;
  int hidden_size = 50;
  double value_loss_coef = 0.5;
  double grad_clip_norm = 40.0;
  bool epsilon_floor = true;
  bool locked_store = false;  // serialize shared updates (deterministic tests)

  static A3cConfig from_params(const nlohmann::json& params);
  nlohmann::json to_params() const;
};

// R_t = r_t + gamma*r_{t+1} + ... + gamma^{k-1-t}*r_{k-1} + gamma^{k-t}*tail.
// `tail` is V(s_k) for a truncated rollout and 0 past a terminal state.
std::vector<double> discounted_returns(std::span<const double> rewards,
                                       double tail, double gamma);

// A_t = R_t - values[t], with values[t] = V(s_t) along the rollout.
std::vector<double> compute_advantages(std::span<const double> rewards,
                                       std::span<const double> values,
                                       double tail, double gamma);

// Policy objective over a frozen rollout (advantages treated as constants):
// sum_t [log pi(a_t|s_t) * A_t + beta * H(pi(.|s_t))].
double a3c_policy_objective(const nnkit::Mlp& policy,
                            const nnkit::PolicyHead& head,
                            const std::vector<std::vector<double>>& states,
                            const std::vector<int>& actions,
                            std::span<const double> advantages, double beta);

// Accumulates the analytic gradient of the objective above into `grads`
// (ascent direction, same layout as policy.params()).
void a3c_policy_gradients(const nnkit::Mlp& policy,
                          const nnkit::PolicyHead& head,
                          const std::vector<std::vector<double>>& states,
                          const std::vector<int>& actions,
                          std::span<const double> advantages, double beta,
                          std::span<double> grads);

TrainOutput train_a3c(const A3cConfig& config,
                      const simenv::EnvironmentPool& pool,
                      const TrainOptions& options);

class A3cPolicy : public Policy {
 public:
  A3cPolicy(A3cConfig config, const nlohmann::json& checkpoint_payload);
  int act(const simenv::AttackEnv& env) override;

 private:
  A3cConfig config_;
  nnkit::Mlp policy_net_;
};

}  // namespace ptrl::agents
