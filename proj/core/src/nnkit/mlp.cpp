#include "ptrl/nnkit/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ptrl::nnkit {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) {
    throw std::invalid_argument("an MLP needs at least input and output dims");
  }
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("layer sizes must be positive");
  }
  size_t offset = 0;
  for (int l = 0; l + 1 < static_cast<int>(sizes_.size()); ++l) {
    offsets_.push_back(offset);
    offset += static_cast<size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(offset, 0.0);
}

size_t Mlp::param_count_for(const std::vector<int>& sizes) {
  size_t n = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += static_cast<size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }
  return n;
}

void Mlp::set_params(std::span<const double> values) {
  if (values.size() != params_.size()) {
    throw std::invalid_argument("parameter vector has wrong length");
  }
  std::copy(values.begin(), values.end(), params_.begin());
}

void Mlp::init_uniform(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    double* w = params_.data() + weight_offset(l);
    for (int i = 0; i < out * in; ++i) w[i] = dist(rng);
    double* b = params_.data() + bias_offset(l);
    for (int i = 0; i < out; ++i) b[i] = 0.0;
  }
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Tape tape;
  return forward(x, tape);
}

std::vector<double> Mlp::forward(std::span<const double> x, Tape& tape) const {
  if (static_cast<int>(x.size()) != input_size()) {
    throw std::invalid_argument("input has wrong length");
  }
  tape.inputs.assign(layer_count(), {});
  tape.pre.assign(layer_count(), {});
  std::vector<double> act(x.begin(), x.end());
  for (int l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    tape.inputs[l] = act;
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double> z(out);
    for (int o = 0; o < out; ++o) {
      double sum = b[o];
      const double* row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) sum += row[i] * act[i];
      z[o] = sum;
    }
    tape.pre[l] = z;
    if (l + 1 < layer_count()) {
      for (double& v : z) v = v > 0 ? v : 0.0;  // relu on hidden layers
    }
    act = std::move(z);
  }
  return act;
}

void Mlp::backward(const Tape& tape, std::span<const double> dout,
                   std::span<double> grad) const {
  backward_impl(tape, dout, grad, nullptr);
}

void Mlp::backward(const Tape& tape, std::span<const double> dout,
                   std::span<double> grad, std::span<double> dinput) const {
  if (static_cast<int>(dinput.size()) != input_size()) {
    throw std::invalid_argument("dinput has wrong length");
  }
  backward_impl(tape, dout, grad, dinput.data());
}

void Mlp::backward_impl(const Tape& tape, std::span<const double> dout,
                        std::span<double> grad, double* dinput) const {
  if (tape.inputs.size() != static_cast<size_t>(layer_count())) {
    throw std::logic_error("backward() without a matching forward()");
  }
  if (static_cast<int>(dout.size()) != output_size()) {
    throw std::invalid_argument("output gradient has wrong length");
  }
  if (grad.size() != params_.size()) {
    throw std::invalid_argument("gradient buffer has wrong length");
  }
  std::vector<double> delta(dout.begin(), dout.end());
  for (int l = layer_count() - 1; l >= 0; --l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    if (l + 1 < layer_count()) {  // undo relu of this layer's output
      for (int o = 0; o < out; ++o) {
        if (tape.pre[l][o] <= 0) delta[o] = 0.0;
      }
    }
    const std::vector<double>& x = tape.inputs[l];
    double* gw = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d != 0.0) {
        double* row = gw + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) row[i] += d * x[i];
      }
      gb[o] += d;
    }
    if (l > 0 || dinput != nullptr) {
      const double* w = params_.data() + weight_offset(l);
      std::vector<double> dprev(in, 0.0);
      for (int o = 0; o < out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* row = w + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) dprev[i] += d * row[i];
      }
      if (l == 0) {
        if (dinput != nullptr) {
          for (int i = 0; i < in; ++i) dinput[i] = dprev[i];
        }
      } else {
        delta = std::move(dprev);
      }
    }
  }
}

}  // namespace ptrl::nnkit
