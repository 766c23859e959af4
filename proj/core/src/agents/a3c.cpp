#include "ptrl/agents/a3c.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ptrl/agents/schedule.hpp"
#include "ptrl/nnkit/optim.hpp"
#include "ptrl/rng.hpp"

namespace ptrl::agents {

A3cConfig A3cConfig::from_params(const nlohmann::json& params) {
  A3cConfig c;
  if (params.contains("model")) {
    const std::string m = params.at("model").get<std::string>();
    if (m == "FFSoftmax") {
      c.model = nnkit::PolicyKind::Softmax;
    } else if (m == "FFMellowmax") {
      c.model = nnkit::PolicyKind::Mellowmax;
    } else {
      throw std::invalid_argument("unknown a3c model '" + m + "'");
    }
  }
  auto opt = [&](const char* key, auto& field) {
    if (params.contains(key)) {
      field = params.at(key).get<std::decay_t<decltype(field)>>();
    }
  };
  opt("learning_rate", c.learning_rate);
  opt("final_epsilon", c.final_epsilon);
  opt("reward_scale", c.reward_scale);
  opt("beta", c.beta);
  opt("gamma", c.gamma);
  opt("alpha", c.alpha);
  opt("omega", c.omega);
  opt("t_max", c.t_max);
  opt("workers", c.workers);
  opt("hidden_layers", c.hidden_layers);
  opt("hidden_size", c.hidden_size);
  opt("value_loss_coef", c.value_loss_coef);
  opt("grad_clip_norm", c.grad_clip_norm);
  opt("epsilon_floor", c.epsilon_floor);
  opt("locked_store", c.locked_store);
  return c;
}

nlohmann::json A3cConfig::to_params() const {
  return nlohmann::json{
      {"model", model == nnkit::PolicyKind::Softmax ? "FFSoftmax"
                                                    : "FFMellowmax"},
      {"learning_rate", learning_rate},
      {"final_epsilon", final_epsilon},
      {"reward_scale", reward_scale},
      {"beta", beta},
      {"gamma", gamma},
      {"alpha", alpha},
      {"omega", omega},
      {"t_max", t_max},
      {"workers", workers},
      {"hidden_layers", hidden_layers},
      {"hidden_size", hidden_size}};
}

std::vector<double> discounted_returns(std::span<const double> rewards,
                                       double tail, double gamma) {
  std::vector<double> out(rewards.size());
  double r = tail;
  for (size_t t = rewards.size(); t-- > 0;) {
    r = rewards[t] + gamma * r;
    out[t] = r;
  }
  return out;
}

std::vector<double> compute_advantages(std::span<const double> rewards,
                                       std::span<const double> values,
                                       double tail, double gamma) {
  if (rewards.size() != values.size()) {
    throw std::invalid_argument("rewards and values differ in length");
  }
  auto returns = discounted_returns(rewards, tail, gamma);
  for (size_t t = 0; t < returns.size(); ++t) returns[t] -= values[t];
  return returns;
}

double a3c_policy_objective(const nnkit::Mlp& policy,
                            const nnkit::PolicyHead& head,
                            const std::vector<std::vector<double>>& states,
                            const std::vector<int>& actions,
                            std::span<const double> advantages, double beta) {
  double objective = 0;
  for (size_t t = 0; t < states.size(); ++t) {
    const auto logits = policy.forward(states[t]);
    const auto dist = nnkit::policy_distribution_ex(head, logits);
    objective += std::log(dist.probs[actions[t]]) * advantages[t] +
                 beta * nnkit::entropy(dist.probs);
  }
  return objective;
}

void a3c_policy_gradients(const nnkit::Mlp& policy,
                          const nnkit::PolicyHead& head,
                          const std::vector<std::vector<double>>& states,
                          const std::vector<int>& actions,
                          std::span<const double> advantages, double beta,
                          std::span<double> grads) {
  nnkit::Tape tape;
  for (size_t t = 0; t < states.size(); ++t) {
    const auto logits = policy.forward(states[t], tape);
    const auto dist = nnkit::policy_distribution_ex(head, logits);
    const auto dlogits = nnkit::policy_objective_grad(
        dist.probs, dist.logit_scale, actions[t], advantages[t], beta);
    policy.backward(tape, dlogits, grads);
  }
}

namespace {

std::vector<int> net_sizes(int in, int hidden_layers, int hidden, int out) {
  std::vector<int> sizes{in};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(hidden);
  sizes.push_back(out);
  return sizes;
}

int sample_from(std::span<const double> probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double u = coin(rng);
  double acc = 0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

struct SharedTrainerState {
  std::atomic<std::int64_t> steps{0};
  std::atomic<bool> stop{false};
  std::mutex eval_mu;    // one evaluation at a time
  std::mutex curve_mu;   // serialized curve writer
  LearningCurve curve;
};

}  // namespace

TrainOutput train_a3c(const A3cConfig& config,
                      const simenv::EnvironmentPool& pool,
                      const TrainOptions& options) {
  auto probe = pool.make_env(0);
  const int obs_size = probe.observation_size();
  const int action_count = probe.action_count();
  const auto policy_sizes =
      net_sizes(obs_size, config.hidden_layers, config.hidden_size,
                action_count);
  const auto value_sizes =
      net_sizes(obs_size, config.hidden_layers, config.hidden_size, 1);

  nnkit::Mlp policy_init(policy_sizes), value_init(value_sizes);
  policy_init.init_uniform(mix_seed(options.seed, 11));
  value_init.init_uniform(mix_seed(options.seed, 12));
  const size_t policy_n = policy_init.param_count();
  const size_t value_n = value_init.param_count();

  std::vector<double> init(policy_n + value_n);
  std::copy(policy_init.params().begin(), policy_init.params().end(),
            init.begin());
  std::copy(value_init.params().begin(), value_init.params().end(),
            init.begin() + policy_n);
  nnkit::ParameterStore store(
      init,
      nnkit::OptimizerState::rmsprop_shared(config.learning_rate, config.alpha),
      config.locked_store ? nnkit::ParameterStore::Mode::Locked
                          : nnkit::ParameterStore::Mode::LockFree);

  const nnkit::PolicyHead head{config.model, config.omega};
  SharedTrainerState shared;

  auto greedy_eval = [&](std::int64_t at_step) {
    std::vector<double> snap(store.size());
    store.snapshot(snap);
    nnkit::Mlp pol(policy_sizes);
    pol.set_params(std::span<const double>(snap).subspan(0, policy_n));
    int solved = 0;
    LearningCurve rows;
    for (size_t p = 0; p < pool.size(); ++p) {
      auto env = pool.make_env(p);
      double total = 0;
      std::int64_t actions = 0;
      while (!env.done()) {
        const auto logits = pol.forward(env.knowledge().encode());
        total += env.step(argmax_lowest(logits)).reward;
        ++actions;
      }
      solved += env.solved() ? 1 : 0;
      rows.push_back(CurvePoint{at_step, static_cast<int>(p), total, actions,
                                env.solved()});
    }
    {
      std::lock_guard<std::mutex> lock(shared.curve_mu);
      shared.curve.insert(shared.curve.end(), rows.begin(), rows.end());
    }
    if (options.early_stop_solved >= 0 &&
        solved >= options.early_stop_solved) {
      shared.stop.store(true);
    }
  };

  auto worker_loop = [&](int w) {
    std::mt19937_64 rng(mix_seed(options.seed, 100 + w));
    nnkit::Mlp policy(policy_sizes), value(value_sizes);
    std::vector<double> snap(store.size());
    std::vector<double> grads(store.size());
    std::span<double> gpolicy(grads.data(), policy_n);
    std::span<double> gvalue(grads.data() + policy_n, value_n);

    std::uint64_t round = 0;
    auto env = pool.make_env(pool.worker_index(w, config.workers, round));

    std::vector<std::vector<double>> states(config.t_max);
    std::vector<nnkit::Tape> vtapes(config.t_max);
    std::vector<int> actions(config.t_max);
    std::vector<double> rewards(config.t_max), values(config.t_max);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    while (!shared.stop.load(std::memory_order_relaxed) &&
           shared.steps.load(std::memory_order_relaxed) < options.total_steps) {
      store.snapshot(snap);
      policy.set_params(std::span<const double>(snap).subspan(0, policy_n));
      value.set_params(std::span<const double>(snap).subspan(policy_n));

      int k = 0;
      bool terminal = false;
      for (; k < config.t_max; ++k) {
        states[k] = env.knowledge().encode();
        const auto logits = policy.forward(states[k]);
        const auto dist = nnkit::policy_distribution_ex(head, logits);
        int a;
        if (config.epsilon_floor && coin(rng) < config.final_epsilon) {
          a = std::uniform_int_distribution<int>(0, action_count - 1)(rng);
        } else {
          a = sample_from(dist.probs, rng);
        }
        actions[k] = a;
        const auto out = env.step(a);
        rewards[k] = out.reward * config.reward_scale;
        values[k] = value.forward(states[k], vtapes[k])[0];
        if (out.done) {
          terminal = true;
          ++k;
          break;
        }
      }

      double tail = 0;
      if (!terminal) {
        tail = value.forward(env.knowledge().encode())[0];
      }
      const auto returns = discounted_returns(
          std::span<const double>(rewards.data(), k), tail, config.gamma);
      std::vector<double> advantages(returns);
      for (int t = 0; t < k; ++t) advantages[t] -= values[t];

      std::fill(grads.begin(), grads.end(), 0.0);
      const std::vector<std::vector<double>> rollout(states.begin(),
                                                     states.begin() + k);
      const std::vector<int> taken(actions.begin(), actions.begin() + k);
      a3c_policy_gradients(policy, head, rollout, taken, advantages,
                           config.beta, gpolicy);
      for (size_t i = 0; i < policy_n; ++i) gpolicy[i] = -gpolicy[i];
      for (int t = 0; t < k; ++t) {
        const double dv = config.value_loss_coef * (values[t] - returns[t]);
        const double dvs[1] = {dv};
        value.backward(vtapes[t], dvs, gvalue);
      }
      nnkit::clip_grad_norm(grads, config.grad_clip_norm);
      store.apply_gradients(grads);

      const std::int64_t prev = shared.steps.fetch_add(k);
      const std::int64_t now = prev + k;
      if (options.eval_interval > 0 &&
          prev / options.eval_interval != now / options.eval_interval) {
        std::unique_lock<std::mutex> lock(shared.eval_mu, std::try_to_lock);
        if (lock.owns_lock()) greedy_eval(now);
      }

      if (terminal) {
        ++round;
        env = pool.make_env(pool.worker_index(w, config.workers, round));
      }
    }
  };

  if (options.total_steps > 0) {
    std::vector<std::thread> threads;
    threads.reserve(config.workers);
    for (int w = 0; w < config.workers; ++w) {
      threads.emplace_back(worker_loop, w);
    }
    for (auto& t : threads) t.join();
  }

  std::vector<double> final_params(store.size());
  store.snapshot(final_params);
  TrainOutput out;
  out.steps_run = shared.steps.load();
  {
    std::lock_guard<std::mutex> lock(shared.curve_mu);
    out.curve = std::move(shared.curve);
  }
  std::sort(out.curve.begin(), out.curve.end(),
            [](const CurvePoint& a, const CurvePoint& b) {
              return a.step != b.step ? a.step < b.step
                                      : a.permutation < b.permutation;
            });
  out.checkpoint = nlohmann::json{
      {"algorithm", "a3c"},
      {"config", config.to_params()},
      {"policy_sizes", policy_sizes},
      {"policy_params",
       std::vector<double>(final_params.begin(),
                           final_params.begin() + policy_n)},
      {"value_sizes", value_sizes},
      {"value_params",
       std::vector<double>(final_params.begin() + policy_n,
                           final_params.end())}};
  return out;
}

A3cPolicy::A3cPolicy(A3cConfig config, const nlohmann::json& payload)
    : config_(std::move(config)),
      policy_net_(payload.at("policy_sizes").get<std::vector<int>>()) {
  policy_net_.set_params(
      payload.at("policy_params").get<std::vector<double>>());
}

int A3cPolicy::act(const simenv::AttackEnv& env) {
  return argmax_lowest(policy_net_.forward(env.knowledge().encode()));
}

}  // namespace ptrl::agents
