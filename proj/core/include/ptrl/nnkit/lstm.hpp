#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ptrl/nnkit/mlp.hpp"

namespace ptrl::nnkit {

// Single LSTM layer with the usual gate structure (input, forget, cell,
// output). Parameters are flat: W_x (4H x I), W_h (4H x H), bias (4H).
class LstmCell {
 public:
  LstmCell(int input_size, int hidden_size);

  struct State {
    std::vector<double> h, c;
  };
  State initial_state() const;

  struct StepTape {
    std::vector<double> x, h_prev, c_prev;
    std::vector<double> i, f, g, o, c, tanh_c;
  };

  int input_size() const { return input_; }
  int hidden_size() const { return hidden_; }
  size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  void init_uniform(std::uint64_t seed);

  // Advances the state in place; returns the new hidden vector. Pass a tape
  // to enable backward_step.
  std::vector<double> step(std::span<const double> x, State& state) const;
  std::vector<double> step(std::span<const double> x, State& state,
                           StepTape& tape) const;

  // One step of backpropagation through time. dh/dc carry the gradients
  // flowing into this step's outputs and are replaced with the gradients for
  // the previous step's outputs. dx receives dLoss/dx.
  void backward_step(const StepTape& tape, std::vector<double>& dh,
                     std::vector<double>& dc, std::span<double> dx,
                     std::span<double> grad) const;

 private:
  int input_, hidden_;
  std::vector<double> params_;

  const double* wx() const { return params_.data(); }
  const double* wh() const {
    return params_.data() + static_cast<size_t>(4) * hidden_ * input_;
  }
  const double* bias() const {
    return params_.data() +
           static_cast<size_t>(4) * hidden_ * (input_ + hidden_);
  }
};

// Feedforward trunk -> LSTM -> linear head. Used as the recurrent Q-function
// variant; the feedforward Q-network is a plain Mlp.
class RecurrentQNet {
 public:
  RecurrentQNet(int input_size, int hidden_layers, int hidden_size,
                int output_size);

  struct State {
    LstmCell::State lstm;
  };
  State initial_state() const;

  size_t param_count() const;
  std::vector<double> get_params() const;
  void set_params(std::span<const double> values);
  void init_uniform(std::uint64_t seed);

  // Stateful acting path.
  std::vector<double> step(std::span<const double> x, State& state) const;

  struct SequenceTape {
    std::vector<Tape> trunk;
    std::vector<LstmCell::StepTape> lstm;
    std::vector<Tape> head;
    std::vector<std::vector<double>> trunk_out;
  };

  // Forward over a whole episode from a fresh state; q[t] for every step.
  std::vector<std::vector<double>> forward_sequence(
      const std::vector<std::vector<double>>& inputs,
      SequenceTape* tape = nullptr) const;

  // BPTT. douts[t] is dLoss/dq_t; grads accumulate in the same layout as
  // get_params(): trunk, lstm, head.
  void backward_sequence(const SequenceTape& tape,
                         const std::vector<std::vector<double>>& douts,
                         std::span<double> grad) const;

  int output_size() const { return head_.output_size(); }

 private:
  Mlp trunk_;      // input -> relu layers -> hidden
  LstmCell lstm_;  // hidden -> hidden
  Mlp head_;       // hidden -> output, linear
};

}  // namespace ptrl::nnkit
