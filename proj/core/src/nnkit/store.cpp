#include "ptrl/nnkit/store.hpp"

#include <cmath>
#include <stdexcept>

namespace ptrl::nnkit {

ParameterStore::ParameterStore(std::span<const double> init,
                               OptimizerState opt, Mode mode)
    : mode_(mode), size_(init.size()), opt_(opt) {
  if (opt_.kind == OptimizerKind::Adam) {
    throw std::invalid_argument(
        "ParameterStore supports sgd and rmsprop_shared");
  }
  params_ = std::make_unique<std::atomic<double>[]>(size_);
  accum_ = std::make_unique<std::atomic<double>[]>(size_);
  for (size_t i = 0; i < size_; ++i) {
    params_[i].store(init[i], std::memory_order_relaxed);
    accum_[i].store(0.0, std::memory_order_relaxed);
  }
}

void ParameterStore::snapshot(std::span<double> out) const {
  if (out.size() != size_) {
    throw std::invalid_argument("snapshot buffer has wrong length");
  }
  for (size_t i = 0; i < size_; ++i) {
    out[i] = params_[i].load(std::memory_order_relaxed);
  }
}

std::vector<double> ParameterStore::values() const {
  std::vector<double> out(size_);
  snapshot(out);
  return out;
}

void ParameterStore::update_element(size_t i, double g) {
  if (opt_.kind == OptimizerKind::Sgd) {
    params_[i].fetch_add(-opt_.lr * g, std::memory_order_relaxed);
    return;
  }
  // rmsprop_shared; the read-modify-write on the accumulator may lose a
  // concurrent update, which the training contract allows.
  const double ms = opt_.rms_alpha * accum_[i].load(std::memory_order_relaxed) +
                    (1 - opt_.rms_alpha) * g * g;
  accum_[i].store(ms, std::memory_order_relaxed);
  params_[i].fetch_add(-opt_.lr * g / std::sqrt(ms + opt_.rms_eps),
                       std::memory_order_relaxed);
}

void ParameterStore::apply_gradients(std::span<const double> grads) {
  if (grads.size() != size_) {
    throw std::invalid_argument("gradient vector has wrong length");
  }
  if (mode_ == Mode::Locked) {
    std::lock_guard<std::mutex> lock(mu_);
    for (size_t i = 0; i < size_; ++i) update_element(i, grads[i]);
  } else {
    for (size_t i = 0; i < size_; ++i) update_element(i, grads[i]);
  }
}

}  // namespace ptrl::nnkit
