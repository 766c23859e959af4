#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptrl/nnkit/mlp.hpp"
#include "ptrl/nnkit/optim.hpp"

namespace ptrl::nnkit {

// Parameter checkpoint: JSON with the size list, the optimizer kind and the
// flat parameter vector. Stable within the repo.
struct Checkpoint {
  std::vector<int> sizes;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  std::vector<double> params;
};

inline nlohmann::json checkpoint_to_json(const Checkpoint& ck) {
  return nlohmann::json{{"sizes", ck.sizes},
                        {"optimizer", optimizer_name(ck.optimizer)},
                        {"params", ck.params}};
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  Checkpoint ck;
  ck.sizes = j.at("sizes").get<std::vector<int>>();
  ck.optimizer = optimizer_from_name(j.at("optimizer").get<std::string>());
  ck.params = j.at("params").get<std::vector<double>>();
  if (ck.params.size() != Mlp::param_count_for(ck.sizes)) {
    throw std::invalid_argument(
        "checkpoint parameter count does not match the size list");
  }
  return ck;
}

inline void save_checkpoint_file(const std::string& path,
                                 const Checkpoint& ck) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  f << checkpoint_to_json(ck).dump(2) << "\n";
}

inline Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read checkpoint '" + path + "'");
  nlohmann::json j;
  f >> j;
  return checkpoint_from_json(j);
}

}  // namespace ptrl::nnkit
