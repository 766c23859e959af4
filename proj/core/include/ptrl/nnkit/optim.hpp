#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ptrl::nnkit {

enum class OptimizerKind { Sgd, Adam, RmsPropShared };

const char* optimizer_name(OptimizerKind kind);
OptimizerKind optimizer_from_name(const std::string& name);

// Per-parameter accumulator state.
//   Sgd           p -= lr * g
//   Adam          bias-corrected first/second moments (eps 1e-8)
//   RmsPropShared non-centered accumulator ms = a*ms + (1-a)*g^2,
//                 p -= lr * g / sqrt(ms + eps), eps defaults to 1e-1. The
//                 asynchronous trainer shares one of these across workers.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Sgd;
  double lr = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double rms_alpha = 0.99;
  double rms_eps = 0.1;

  std::vector<double> m;  // adam first moment
  std::vector<double> v;  // adam second moment / rmsprop accumulator
  std::int64_t t = 0;     // adam step counter

  static OptimizerState sgd(double lr);
  static OptimizerState adam(double lr);
  static OptimizerState rmsprop_shared(double lr, double alpha,
                                       double eps = 0.1);
};

// One in-place update step. Accumulators are lazily sized on first use;
// afterwards a length mismatch throws.
void apply_update(OptimizerState& opt, std::span<double> params,
                  std::span<const double> grads);

// Rescales grads in place so the global L2 norm is at most max_norm.
void clip_grad_norm(std::span<double> grads, double max_norm);

}  // namespace ptrl::nnkit
