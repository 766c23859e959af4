#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ptrl/nnkit/optim.hpp"

namespace ptrl::nnkit {

// Shared parameter vector for asynchronous training. Workers snapshot the
// current values, compute gradients locally and apply them here through a
// shared RMSProp-style accumulator.
//
// LockFree mode updates every element with relaxed atomics: concurrent
// updates interleave at parameter granularity and lost accumulator updates
// are tolerated (asynchronous training is correct in expectation, not
// bitwise). Locked mode serializes whole updates behind a mutex for
// deterministic single-worker tests.
class ParameterStore {
 public:
  enum class Mode { Locked, LockFree };

  ParameterStore(std::span<const double> init, OptimizerState opt,
                 Mode mode = Mode::LockFree);

  size_t size() const { return size_; }
  Mode mode() const { return mode_; }

  void snapshot(std::span<double> out) const;
  std::vector<double> values() const;

  void apply_gradients(std::span<const double> grads);

 private:
  void update_element(size_t i, double g);

  Mode mode_;
  size_t size_;
  OptimizerState opt_;  // hyperparameters only; accumulator lives in accum_
  std::unique_ptr<std::atomic<double>[]> params_;
  std::unique_ptr<std::atomic<double>[]> accum_;
  mutable std::mutex mu_;
};

}  // namespace ptrl::nnkit
