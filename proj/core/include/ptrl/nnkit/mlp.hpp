#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ptrl::nnkit {

// Activation record for one forward pass; feed it back to backward().
struct Tape {
  std::vector<std::vector<double>> inputs;  // inputs[l]: input to layer l
  std::vector<std::vector<double>> pre;     // pre[l]: pre-activation of layer l
};

// Plain fully connected network: rectified-linear hidden layers, linear
// output. Parameters live in one flat vector (per layer: row-major weight
// matrix, then biases) so optimizers, checkpoints and the shared parameter
// store can treat the whole network as a single array.
class Mlp {
 public:
  explicit Mlp(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  size_t param_count() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  void set_params(std::span<const double> values);

  // Uniform init in +-1/sqrt(fan_in), biases zero.
  void init_uniform(std::uint64_t seed);

  std::vector<double> forward(std::span<const double> x) const;
  std::vector<double> forward(std::span<const double> x, Tape& tape) const;

  // Accumulates dLoss/dparams into `grad` (same length as params) given
  // dLoss/doutput. Requires the tape of a prior forward. Returns nothing;
  // call input_gradient afterwards if dLoss/dinput is needed.
  void backward(const Tape& tape, std::span<const double> dout,
                std::span<double> grad) const;
  void backward(const Tape& tape, std::span<const double> dout,
                std::span<double> grad, std::span<double> dinput) const;

  // Expected parameter count for a size list.
  static size_t param_count_for(const std::vector<int>& sizes);

 private:
  void backward_impl(const Tape& tape, std::span<const double> dout,
                     std::span<double> grad, double* dinput) const;

  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }
  size_t weight_offset(int layer) const { return offsets_[layer]; }
  size_t bias_offset(int layer) const {
    return offsets_[layer] +
           static_cast<size_t>(sizes_[layer]) * sizes_[layer + 1];
  }

  std::vector<int> sizes_;
  std::vector<size_t> offsets_;
  std::vector<double> params_;
};

}  // namespace ptrl::nnkit
