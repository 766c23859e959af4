#include "ptrl/nnkit/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace ptrl::nnkit {

const char* optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::RmsPropShared: return "rmsprop_shared";
  }
  return "?";
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "rmsprop_shared") return OptimizerKind::RmsPropShared;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

OptimizerState OptimizerState::sgd(double lr) {
  OptimizerState s;
  s.kind = OptimizerKind::Sgd;
  s.lr = lr;
  return s;
}

OptimizerState OptimizerState::adam(double lr) {
  OptimizerState s;
  s.kind = OptimizerKind::Adam;
  s.lr = lr;
  return s;
}

OptimizerState OptimizerState::rmsprop_shared(double lr, double alpha,
                                              double eps) {
  OptimizerState s;
  s.kind = OptimizerKind::RmsPropShared;
  s.lr = lr;
  s.rms_alpha = alpha;
  s.rms_eps = eps;
  return s;
}

void apply_update(OptimizerState& opt, std::span<double> params,
                  std::span<const double> grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("params and grads differ in length");
  }
  switch (opt.kind) {
    case OptimizerKind::Sgd:
      for (size_t i = 0; i < params.size(); ++i) {
        params[i] -= opt.lr * grads[i];
      }
      break;

    case OptimizerKind::Adam: {
      if (opt.m.empty()) {
        opt.m.assign(params.size(), 0.0);
        opt.v.assign(params.size(), 0.0);
      }
      if (opt.m.size() != params.size()) {
        throw std::invalid_argument("optimizer state has wrong length");
      }
      opt.t += 1;
      const double c1 = 1.0 - std::pow(opt.adam_beta1, opt.t);
      const double c2 = 1.0 - std::pow(opt.adam_beta2, opt.t);
      for (size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        opt.m[i] = opt.adam_beta1 * opt.m[i] + (1 - opt.adam_beta1) * g;
        opt.v[i] = opt.adam_beta2 * opt.v[i] + (1 - opt.adam_beta2) * g * g;
        params[i] -= opt.lr * (opt.m[i] / c1) /
                     (std::sqrt(opt.v[i] / c2) + opt.adam_eps);
      }
      break;
    }

    case OptimizerKind::RmsPropShared: {
      if (opt.v.empty()) opt.v.assign(params.size(), 0.0);
      if (opt.v.size() != params.size()) {
        throw std::invalid_argument("optimizer state has wrong length");
      }
      for (size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        opt.v[i] = opt.rms_alpha * opt.v[i] + (1 - opt.rms_alpha) * g * g;
        params[i] -= opt.lr * g / std::sqrt(opt.v[i] + opt.rms_eps);
      }
      break;
    }
  }
}

void clip_grad_norm(std::span<double> grads, double max_norm) {
  double sq = 0;
  for (double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0) {
    const double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
}

}  // namespace ptrl::nnkit
