#include "ptrl/agents/dqn.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "ptrl/agents/schedule.hpp"
#include "ptrl/nnkit/optim.hpp"
#include "ptrl/rng.hpp"

namespace ptrl::agents {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw std::invalid_argument("replay capacity must be positive");
  }
  ring_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
  if (ring_.size() < capacity_) {
    ring_.push_back(std::move(t));
  } else {
    ring_[write_] = std::move(t);  // overwrite the oldest entry
  }
  write_ = (write_ + 1) % capacity_;
}

const Transition& ReplayBuffer::sample(std::mt19937_64& rng) const {
  if (ring_.empty()) throw std::logic_error("sampling an empty replay buffer");
  std::uniform_int_distribution<size_t> pick(0, ring_.size() - 1);
  return ring_[pick(rng)];
}

DqnConfig DqnConfig::from_params(const nlohmann::json& params) {
  DqnConfig c;
  if (params.contains("q_func")) {
    const auto& q = params.at("q_func");
    const std::string kind = q.at(0).get<std::string>();
    if (kind == "FCStateQFunctionWithDiscreteAction") {
      c.recurrent = false;
    } else if (kind == "FCLSTMStateQFunction") {
      c.recurrent = true;
    } else {
      throw std::invalid_argument("unknown q_func '" + kind + "'");
    }
    c.hidden_layers = q.at(1).get<int>();
    c.hidden_size = q.at(2).get<int>();
  }
  if (params.contains("optimizer")) {
    const auto& o = params.at("optimizer");
    if (o.at(0).get<std::string>() != "adam") {
      throw std::invalid_argument("dqn optimizer must be adam");
    }
    c.learning_rate = o.at(1).get<double>();
  }
  if (params.contains("explorer")) {
    const auto& e = params.at("explorer");
    if (e.at(0).get<std::string>() != "LinearDecayEpsilonGreedy") {
      throw std::invalid_argument("unknown explorer kind");
    }
    c.final_epsilon = e.at(1).get<double>();
    c.exploration_steps = e.at(2).get<std::int64_t>();
  }
  if (params.contains("replay_buffer")) {
    c.replay_capacity = params.at("replay_buffer").get<size_t>();
  }
  if (params.contains("gamma")) c.gamma = params.at("gamma").get<double>();
  if (params.contains("target_update_interval")) {
    c.target_update_interval =
        params.at("target_update_interval").get<std::int64_t>();
  }
  if (params.contains("update_interval")) {
    c.update_interval = params.at("update_interval").get<std::int64_t>();
  }
  if (params.contains("replay_start_size")) {
    c.replay_start_size = params.at("replay_start_size").get<size_t>();
  }
  if (params.contains("batch_size")) {
    c.batch_size = params.at("batch_size").get<int>();
  }
  if (params.contains("grad_clip")) {
    c.grad_clip = params.at("grad_clip").get<bool>();
  }
  return c;
}

nlohmann::json DqnConfig::to_params() const {
  return nlohmann::json{
      {"q_func",
       {recurrent ? "FCLSTMStateQFunction" : "FCStateQFunctionWithDiscreteAction",
        hidden_layers, hidden_size}},
      {"optimizer", {"adam", learning_rate}},
      {"explorer", {"LinearDecayEpsilonGreedy", final_epsilon, exploration_steps}},
      {"replay_buffer", replay_capacity},
      {"gamma", gamma},
      {"target_update_interval", target_update_interval},
      {"update_interval", update_interval},
      {"replay_start_size", replay_start_size},
      {"batch_size", batch_size},
      {"grad_clip", grad_clip}};
}

namespace {

std::vector<int> ff_sizes(const DqnConfig& c, int obs, int actions) {
  std::vector<int> sizes{obs};
  for (int i = 0; i < c.hidden_layers; ++i) sizes.push_back(c.hidden_size);
  sizes.push_back(actions);
  return sizes;
}

int ff_greedy_eval(const nnkit::Mlp& net, const simenv::EnvironmentPool& pool,
                   std::int64_t at_step, LearningCurve& curve) {
  int solved = 0;
  for (size_t p = 0; p < pool.size(); ++p) {
    auto env = pool.make_env(p);
    double total = 0;
    std::int64_t actions = 0;
    while (!env.done()) {
      const auto q = net.forward(env.knowledge().encode());
      total += env.step(argmax_lowest(q)).reward;
      ++actions;
    }
    solved += env.solved() ? 1 : 0;
    curve.push_back(CurvePoint{at_step, static_cast<int>(p), total, actions,
                               env.solved()});
  }
  return solved;
}

}  // namespace

DqnTrainer::DqnTrainer(const DqnConfig& config,
                       const simenv::EnvironmentPool& pool, std::uint64_t seed)
    : config_(config),
      pool_(pool),
      online_(ff_sizes(config, pool.make_env(0).observation_size(),
                       pool.make_env(0).action_count())),
      target_({1, 1}),
      adam_(nnkit::OptimizerState::adam(config.learning_rate)),
      replay_(config.replay_capacity),
      rng_(mix_seed(seed, 2)),
      env_(pool_.next()) {
  online_.init_uniform(mix_seed(seed, 1));
  target_ = online_;
  obs_ = env_.knowledge().encode();
}

void DqnTrainer::step() {
  const EpsilonSchedule schedule{1.0, config_.final_epsilon,
                                 config_.exploration_steps};
  const double eps = schedule.current(steps_);
  const int action = epsilon_greedy(online_.forward(obs_), eps, rng_);
  const auto result = env_.step(action);
  replay_.push(Transition{std::move(obs_), action, result.reward,
                          env_.knowledge().encode(), result.done});
  if (result.done) env_ = pool_.next();
  obs_ = env_.knowledge().encode();
  ++steps_;

  if (replay_.size() >= config_.replay_start_size &&
      steps_ % config_.update_interval == 0) {
    std::vector<double> grad(online_.param_count(), 0.0);
    std::vector<double> dout(online_.output_size(), 0.0);
    nnkit::Tape tape;
    for (int b = 0; b < config_.batch_size; ++b) {
      const Transition& t = replay_.sample(rng_);
      const double y = dqn_target(t.reward, t.done, config_.gamma,
                                  t.done ? std::vector<double>{0.0}
                                         : target_.forward(t.next_state));
      const auto q = online_.forward(t.state, tape);
      std::fill(dout.begin(), dout.end(), 0.0);
      dout[t.action] = 2.0 * (q[t.action] - y) / config_.batch_size;
      online_.backward(tape, dout, grad);
    }
    if (config_.grad_clip) nnkit::clip_grad_norm(grad, config_.grad_clip_norm);
    nnkit::apply_update(adam_, online_.params(), grad);
    ++gradient_steps_;
  }

  if (steps_ % config_.target_update_interval == 0) {
    target_.set_params(online_.params());
  }
}

namespace {

TrainOutput train_dqn_feedforward(const DqnConfig& config,
                                  const simenv::EnvironmentPool& pool,
                                  const TrainOptions& options) {
  DqnTrainer trainer(config, pool, options.seed);
  TrainOutput out;
  for (std::int64_t step = 1; step <= options.total_steps; ++step) {
    trainer.step();
    out.steps_run = step;
    if (options.eval_interval > 0 && step % options.eval_interval == 0) {
      const int solved = ff_greedy_eval(trainer.online(), pool, step, out.curve);
      if (options.early_stop_solved >= 0 &&
          solved >= options.early_stop_solved) {
        break;
      }
    }
  }
  out.checkpoint = nlohmann::json{
      {"algorithm", "dqn"},
      {"config", config.to_params()},
      {"sizes", trainer.online().sizes()},
      {"params", std::vector<double>(trainer.online().params().begin(),
                                     trainer.online().params().end())}};
  return out;
}

struct EpisodeStep {
  std::vector<double> state;
  int action = 0;
  double reward = 0;
  bool done = false;
};

// Episodic replay for the recurrent variant: whole episodes, evicted oldest
// first once the total transition count exceeds the capacity.
class EpisodicReplay {
 public:
  explicit EpisodicReplay(size_t capacity) : capacity_(capacity) {}

  void push(std::vector<EpisodeStep> episode) {
    total_ += episode.size();
    episodes_.push_back(std::move(episode));
    while (total_ > capacity_ && episodes_.size() > 1) {
      total_ -= episodes_.front().size();
      episodes_.pop_front();
    }
  }
  size_t total_transitions() const { return total_; }
  const std::vector<EpisodeStep>& sample(std::mt19937_64& rng) const {
    std::uniform_int_distribution<size_t> pick(0, episodes_.size() - 1);
    return episodes_[pick(rng)];
  }
  bool empty() const { return episodes_.empty(); }

 private:
  size_t capacity_;
  size_t total_ = 0;
  std::deque<std::vector<EpisodeStep>> episodes_;
};

TrainOutput train_dqn_recurrent(const DqnConfig& config,
                                const simenv::EnvironmentPool& pool,
                                const TrainOptions& options) {
  simenv::EnvironmentPool rotation = pool;
  auto probe = rotation.make_env(0);
  const int obs_size = probe.observation_size();
  const int action_count = probe.action_count();

  nnkit::RecurrentQNet online(obs_size, config.hidden_layers,
                              config.hidden_size, action_count);
  online.init_uniform(mix_seed(options.seed, 1));
  nnkit::RecurrentQNet target = online;

  auto adam = nnkit::OptimizerState::adam(config.learning_rate);
  std::mt19937_64 rng(mix_seed(options.seed, 2));
  EpsilonSchedule schedule{1.0, config.final_epsilon, config.exploration_steps};
  EpisodicReplay replay(config.replay_capacity);

  TrainOutput out;
  auto env = rotation.next();
  auto state = online.initial_state();
  std::vector<EpisodeStep> episode;
  std::vector<double> params(online.param_count());
  std::vector<double> grad(online.param_count(), 0.0);

  auto greedy_eval = [&](std::int64_t at_step) {
    int solved = 0;
    for (size_t p = 0; p < rotation.size(); ++p) {
      auto e = rotation.make_env(p);
      auto s = online.initial_state();
      double total = 0;
      std::int64_t actions = 0;
      while (!e.done()) {
        const auto q = online.step(e.knowledge().encode(), s);
        total += e.step(argmax_lowest(q)).reward;
        ++actions;
      }
      solved += e.solved() ? 1 : 0;
      out.curve.push_back(CurvePoint{at_step, static_cast<int>(p), total,
                                     actions, e.solved()});
    }
    return solved;
  };

  for (std::int64_t step = 1; step <= options.total_steps; ++step) {
    const double eps = schedule.current(step - 1);
    std::vector<double> obs = env.knowledge().encode();
    const auto q = online.step(obs, state);
    const int action = epsilon_greedy(q, eps, rng);
    const auto result = env.step(action);
    episode.push_back(EpisodeStep{std::move(obs), action, result.reward,
                                  result.done});
    if (result.done) {
      replay.push(std::move(episode));
      episode.clear();
      env = rotation.next();
      state = online.initial_state();
    }

    if (!replay.empty() &&
        replay.total_transitions() >= config.replay_start_size &&
        step % config.update_interval == 0) {
      const auto& ep = replay.sample(rng);
      std::vector<std::vector<double>> inputs;
      inputs.reserve(ep.size());
      for (const auto& es : ep) inputs.push_back(es.state);
      nnkit::RecurrentQNet::SequenceTape tape;
      const auto q_seq = online.forward_sequence(inputs, &tape);
      const auto tq_seq = target.forward_sequence(inputs);
      std::vector<std::vector<double>> douts(
          ep.size(), std::vector<double>(action_count, 0.0));
      for (size_t t = 0; t < ep.size(); ++t) {
        double y = ep[t].reward;
        if (!ep[t].done && t + 1 < ep.size()) {
          y += config.gamma * *std::max_element(tq_seq[t + 1].begin(),
                                                tq_seq[t + 1].end());
        }
        douts[t][ep[t].action] =
            2.0 * (q_seq[t][ep[t].action] - y) / static_cast<double>(ep.size());
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      online.backward_sequence(tape, douts, grad);
      if (config.grad_clip) nnkit::clip_grad_norm(grad, config.grad_clip_norm);
      params = online.get_params();
      nnkit::apply_update(adam, params, grad);
      online.set_params(params);
    }

    if (step % config.target_update_interval == 0) {
      target.set_params(online.get_params());
    }

    out.steps_run = step;
    if (options.eval_interval > 0 && step % options.eval_interval == 0) {
      const int solved = greedy_eval(step);
      if (options.early_stop_solved >= 0 &&
          solved >= options.early_stop_solved) {
        break;
      }
    }
  }

  out.checkpoint = nlohmann::json{{"algorithm", "dqn"},
                                  {"config", config.to_params()},
                                  {"params", online.get_params()}};
  return out;
}

}  // namespace

TrainOutput train_dqn(const DqnConfig& config,
                      const simenv::EnvironmentPool& pool,
                      const TrainOptions& options) {
  return config.recurrent ? train_dqn_recurrent(config, pool, options)
                          : train_dqn_feedforward(config, pool, options);
}

DqnPolicy::DqnPolicy(DqnConfig config, const nlohmann::json& payload)
    : config_(std::move(config)) {
  const auto params = payload.at("params").get<std::vector<double>>();
  if (config_.recurrent) {
    // Observation size is recoverable from the parameter count; the bundled
    // layout is fixed, so take it from the standard layout.
    const int obs = simenv::ObservationLayout::standard()->total_slots();
    const int actions = simenv::ActionCatalog::standard()->size();
    rnet_ = std::make_unique<nnkit::RecurrentQNet>(
        obs, config_.hidden_layers, config_.hidden_size, actions);
    rnet_->set_params(params);
    rstate_ = rnet_->initial_state();
  } else {
    net_ = std::make_unique<nnkit::Mlp>(
        payload.at("sizes").get<std::vector<int>>());
    net_->set_params(params);
  }
}

void DqnPolicy::begin_episode() {
  if (rnet_) rstate_ = rnet_->initial_state();
}

int DqnPolicy::act(const simenv::AttackEnv& env) {
  const auto obs = env.knowledge().encode();
  const auto q = rnet_ ? rnet_->step(obs, rstate_) : net_->forward(obs);
  return argmax_lowest(q);
}

}  // namespace ptrl::agents
