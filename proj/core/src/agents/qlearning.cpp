#include "ptrl/agents/qlearning.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ptrl/rng.hpp"

namespace ptrl::agents {

std::vector<double>& QTable::row(const std::string& key) {
  auto it = table_.find(key);
  if (it == table_.end()) {
    it = table_.emplace(key, std::vector<double>(action_count_, 0.0)).first;
  }
  return it->second;
}

std::vector<double> QTable::values(const std::string& key) const {
  if (const auto* v = find(key)) return *v;
  return std::vector<double>(action_count_, 0.0);
}

const std::vector<double>* QTable::find(const std::string& key) const {
  auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

nlohmann::json QTable::to_json() const {
  std::map<std::string, const std::vector<double>*> sorted;
  for (const auto& [k, v] : table_) sorted.emplace(k, &v);
  nlohmann::json states = nlohmann::json::object();
  for (const auto& [k, v] : sorted) states[k] = *v;
  return nlohmann::json{{"actions", action_count_}, {"states", states}};
}

QTable QTable::from_json(const nlohmann::json& j) {
  QTable t(j.at("actions").get<int>());
  for (const auto& [k, v] : j.at("states").items()) {
    auto row = v.get<std::vector<double>>();
    if (static_cast<int>(row.size()) != t.action_count_) {
      throw std::invalid_argument("Q-table row has wrong action count");
    }
    t.table_.emplace(k, std::move(row));
  }
  return t;
}

double q_update(QTable& table, const std::string& state, int action, double reward,
                const std::string* next_state, double alpha, double gamma) {
  if (alpha < 0 || alpha > 1 || gamma < 0 || gamma > 1) {
    throw std::invalid_argument("alpha and gamma must lie in [0, 1]");
  }
  double bootstrap = 0.0;
  if (next_state != nullptr) {
    const auto next = table.values(*next_state);
    bootstrap = *std::max_element(next.begin(), next.end());
  }
  auto& row = table.row(state);
  double& q = row.at(action);
  q += alpha * (reward + gamma * bootstrap - q);
  return q;
}

QLearningConfig QLearningConfig::from_params(const nlohmann::json& params) {
  QLearningConfig c;
  c.learning_rate = params.at("learning_rate").get<double>();
  c.final_epsilon = params.at("final_epsilon").get<double>();
  c.exploration_steps = params.at("exploration_steps").get<std::int64_t>();
  c.gamma = params.at("gamma").get<double>();
  return c;
}

nlohmann::json QLearningConfig::to_params() const {
  return nlohmann::json{{"learning_rate", learning_rate},
                        {"final_epsilon", final_epsilon},
                        {"exploration_steps", exploration_steps},
                        {"gamma", gamma}};
}

int QTablePolicy::act(const simenv::AttackEnv& env) {
  return argmax_lowest(table_.values(env.knowledge().canonical_key()));
}

namespace {

// Greedy pass over every pool permutation; appends curve points and returns
// the number of solved permutations.
int greedy_eval(const QTable& table, const simenv::EnvironmentPool& pool,
                std::int64_t at_step, LearningCurve& curve) {
  int solved = 0;
  for (size_t p = 0; p < pool.size(); ++p) {
    auto env = pool.make_env(p);
    double total = 0;
    std::int64_t actions = 0;
    while (!env.done()) {
      const int a = argmax_lowest(table.values(env.knowledge().canonical_key()));
      total += env.step(a).reward;
      ++actions;
    }
    solved += env.solved() ? 1 : 0;
    curve.push_back(CurvePoint{at_step, static_cast<int>(p), total, actions,
                               env.solved()});
  }
  return solved;
}

}  // namespace

TrainOutput train_qlearning(const QLearningConfig& config,
                            const simenv::EnvironmentPool& pool,
                            const TrainOptions& options) {
  simenv::EnvironmentPool rotation = pool;  // private rotation cursor
  QTable table(rotation.make_env(0).action_count());
  std::mt19937_64 rng(mix_seed(options.seed, 0));
  EpsilonSchedule schedule{1.0, config.final_epsilon, config.exploration_steps};

  TrainOutput out;
  auto env = rotation.next();
  std::string state = env.knowledge().canonical_key();
  for (std::int64_t step = 0; step < options.total_steps; ++step) {
    const double eps = schedule.current(step);
    const int action = epsilon_greedy(table.values(state), eps, rng);
    const auto result = env.step(action);
    const std::string next = env.knowledge().canonical_key();
    if (result.done) {
      q_update(table, state, action, result.reward, nullptr,
               config.learning_rate, config.gamma);
      env = rotation.next();
      state = env.knowledge().canonical_key();
    } else {
      q_update(table, state, action, result.reward, &next,
               config.learning_rate, config.gamma);
      state = next;
    }
    out.steps_run = step + 1;
    if (options.eval_interval > 0 && (step + 1) % options.eval_interval == 0) {
      const int solved = greedy_eval(table, rotation, step + 1, out.curve);
      if (options.early_stop_solved >= 0 &&
          solved >= options.early_stop_solved) {
        break;
      }
    }
  }

  out.checkpoint = nlohmann::json{{"algorithm", "qlearning"},
                                  {"config", config.to_params()},
                                  {"qtable", table.to_json()}};
  return out;
}

}  // namespace ptrl::agents
