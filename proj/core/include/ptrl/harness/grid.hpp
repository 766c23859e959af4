#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "ptrl/agents/agent.hpp"

namespace ptrl::harness {

// A hyperparameter grid: per-key value lists in the algorithm's canonical
// key order. Expansion is the cartesian product with the LAST key varying
// fastest, so config_at is a mixed-radix decode of the index.
class HyperGrid {
 public:
  static HyperGrid from_json(const nlohmann::json& j);
  static HyperGrid load_file(const std::string& path);
  nlohmann::json to_json() const;

  const std::string& algorithm() const { return algorithm_; }
  size_t size() const;
  agents::AgentConfig config_at(size_t index) const;

  const std::vector<std::pair<std::string, std::vector<nlohmann::json>>>&
  dimensions() const {
    return dims_;
  }

  // Canonical key order per algorithm (the order hyperparameters are listed
  // in when a configuration is written out).
  static const std::vector<std::string>& canonical_keys(
      const std::string& algorithm);

 private:
  std::string algorithm_;
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> dims_;
};

std::vector<agents::AgentConfig> expand_grid(const HyperGrid& grid);

}  // namespace ptrl::harness
