#include "ptrl/harness/grid.hpp"

#include <fstream>
#include <stdexcept>

namespace ptrl::harness {

const std::vector<std::string>& HyperGrid::canonical_keys(
    const std::string& algorithm) {
  static const std::vector<std::string> qlearning = {
      "learning_rate", "final_epsilon", "exploration_steps", "gamma"};
  static const std::vector<std::string> a3c = {
      "model", "learning_rate", "final_epsilon", "reward_scale",
      "beta",  "gamma",         "alpha"};
  static const std::vector<std::string> dqn = {
      "q_func",        "optimizer",
      "explorer",      "replay_buffer",
      "gamma",         "target_update_interval",
      "update_interval", "replay_start_size"};
  if (algorithm == "qlearning") return qlearning;
  if (algorithm == "a3c") return a3c;
  if (algorithm == "dqn") return dqn;
  throw std::invalid_argument("unknown grid algorithm '" + algorithm + "'");
}

HyperGrid HyperGrid::from_json(const nlohmann::json& j) {
  HyperGrid g;
  g.algorithm_ = j.at("algorithm").get<std::string>();
  const auto& keys = canonical_keys(g.algorithm_);
  const auto& grid = j.at("grid");
  for (const auto& [key, _] : grid.items()) {
    bool known = false;
    for (const auto& k : keys) known = known || k == key;
    if (!known) {
      throw std::invalid_argument("grid key '" + key +
                                  "' is not a hyperparameter of " +
                                  g.algorithm_);
    }
  }
  for (const auto& key : keys) {
    if (!grid.contains(key)) {
      throw std::invalid_argument("grid is missing key '" + key + "'");
    }
    const auto& values = grid.at(key);
    if (!values.is_array() || values.empty()) {
      throw std::invalid_argument("grid key '" + key +
                                  "' needs a nonempty value list");
    }
    g.dims_.emplace_back(key,
                         std::vector<nlohmann::json>(values.begin(),
                                                     values.end()));
  }
  return g;
}

HyperGrid HyperGrid::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read grid file '" + path + "'");
  nlohmann::json j;
  f >> j;
  return from_json(j);
}

nlohmann::json HyperGrid::to_json() const {
  nlohmann::json grid = nlohmann::json::object();
  for (const auto& [key, values] : dims_) grid[key] = values;
  return nlohmann::json{{"algorithm", algorithm_}, {"grid", grid}};
}

size_t HyperGrid::size() const {
  size_t n = 1;
  for (const auto& [_, values] : dims_) n *= values.size();
  return n;
}

agents::AgentConfig HyperGrid::config_at(size_t index) const {
  if (index >= size()) {
    throw std::out_of_range("grid index " + std::to_string(index) +
                            " out of range");
  }
  agents::AgentConfig config;
  config.algorithm = algorithm_;
  // last key fastest
  for (size_t d = dims_.size(); d-- > 0;) {
    const auto& [key, values] = dims_[d];
    config.params[key] = values[index % values.size()];
    index /= values.size();
  }
  return config;
}

std::vector<agents::AgentConfig> expand_grid(const HyperGrid& grid) {
  std::vector<agents::AgentConfig> out;
  out.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) out.push_back(grid.config_at(i));
  return out;
}

}  // namespace ptrl::harness
