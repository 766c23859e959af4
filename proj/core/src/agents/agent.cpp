#include "ptrl/agents/agent.hpp"

#include <fstream>
#include <stdexcept>

#include "ptrl/agents/a3c.hpp"
#include "ptrl/agents/dqn.hpp"
#include "ptrl/agents/qlearning.hpp"

namespace ptrl::agents {

AgentConfig AgentConfig::from_json(const nlohmann::json& j) {
  AgentConfig c;
  c.algorithm = j.at("algorithm").get<std::string>();
  if (c.algorithm != "qlearning" && c.algorithm != "dqn" &&
      c.algorithm != "a3c") {
    throw std::invalid_argument("unknown algorithm '" + c.algorithm + "'");
  }
  c.params = j;
  c.params.erase("algorithm");
  return c;
}

AgentConfig AgentConfig::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read agent config '" + path + "'");
  nlohmann::json j;
  f >> j;
  return from_json(j);
}

nlohmann::json AgentConfig::to_json() const {
  nlohmann::json j = params;
  j["algorithm"] = algorithm;
  return j;
}

TrainOutput train_agent(const AgentConfig& config,
                        const simenv::EnvironmentPool& pool,
                        const TrainOptions& options) {
  if (config.algorithm == "qlearning") {
    return train_qlearning(QLearningConfig::from_params(config.params), pool,
                           options);
  }
  if (config.algorithm == "dqn") {
    return train_dqn(DqnConfig::from_params(config.params), pool, options);
  }
  if (config.algorithm == "a3c") {
    return train_a3c(A3cConfig::from_params(config.params), pool, options);
  }
  throw std::invalid_argument("unknown algorithm '" + config.algorithm + "'");
}

std::unique_ptr<Policy> policy_from_checkpoint(
    const nlohmann::json& checkpoint) {
  const std::string algorithm = checkpoint.at("algorithm").get<std::string>();
  if (algorithm == "qlearning") {
    return std::make_unique<QTablePolicy>(
        QTable::from_json(checkpoint.at("qtable")));
  }
  if (algorithm == "dqn") {
    return std::make_unique<DqnPolicy>(
        DqnConfig::from_params(checkpoint.at("config")), checkpoint);
  }
  if (algorithm == "a3c") {
    return std::make_unique<A3cPolicy>(
        A3cConfig::from_params(checkpoint.at("config")), checkpoint);
  }
  throw std::invalid_argument("unknown checkpoint algorithm '" + algorithm +
                              "'");
}

void save_checkpoint_file(const std::string& path,
                          const nlohmann::json& checkpoint) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  f << checkpoint.dump() << "\n";
}

nlohmann::json load_checkpoint_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read checkpoint '" + path + "'");
  nlohmann::json j;
  f >> j;
  return j;
}

}  // namespace ptrl::agents
