#include "ptrl/nnkit/lstm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ptrl::nnkit {

namespace {
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

LstmCell::LstmCell(int input_size, int hidden_size)
    : input_(input_size), hidden_(hidden_size) {
  if (input_ <= 0 || hidden_ <= 0) {
    throw std::invalid_argument("LSTM sizes must be positive");
  }
  params_.assign(static_cast<size_t>(4) * hidden_ * (input_ + hidden_) +
                     static_cast<size_t>(4) * hidden_,
                 0.0);
}

LstmCell::State LstmCell::initial_state() const {
  return State{std::vector<double>(hidden_, 0.0),
               std::vector<double>(hidden_, 0.0)};
}

void LstmCell::init_uniform(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double bx = 1.0 / std::sqrt(static_cast<double>(input_));
  const double bh = 1.0 / std::sqrt(static_cast<double>(hidden_));
  std::uniform_real_distribution<double> dx(-bx, bx), dh(-bh, bh);
  double* p = params_.data();
  for (int i = 0; i < 4 * hidden_ * input_; ++i) p[i] = dx(rng);
  p += 4 * hidden_ * input_;
  for (int i = 0; i < 4 * hidden_ * hidden_; ++i) p[i] = dh(rng);
  // biases stay zero
}

std::vector<double> LstmCell::step(std::span<const double> x,
                                   State& state) const {
  StepTape tape;
  return step(x, state, tape);
}

std::vector<double> LstmCell::step(std::span<const double> x, State& state,
                                   StepTape& tape) const {
  if (static_cast<int>(x.size()) != input_) {
    throw std::invalid_argument("LSTM input has wrong length");
  }
  tape.x.assign(x.begin(), x.end());
  tape.h_prev = state.h;
  tape.c_prev = state.c;

  std::vector<double> z(static_cast<size_t>(4) * hidden_);
  for (int r = 0; r < 4 * hidden_; ++r) {
    double sum = bias()[r];
    const double* rx = wx() + static_cast<size_t>(r) * input_;
    for (int i = 0; i < input_; ++i) sum += rx[i] * x[i];
    const double* rh = wh() + static_cast<size_t>(r) * hidden_;
    for (int i = 0; i < hidden_; ++i) sum += rh[i] * state.h[i];
    z[r] = sum;
  }

  tape.i.resize(hidden_);
  tape.f.resize(hidden_);
  tape.g.resize(hidden_);
  tape.o.resize(hidden_);
  tape.c.resize(hidden_);
  tape.tanh_c.resize(hidden_);
  for (int j = 0; j < hidden_; ++j) {
    tape.i[j] = sigmoid(z[j]);
    tape.f[j] = sigmoid(z[hidden_ + j]);
    tape.g[j] = std::tanh(z[2 * hidden_ + j]);
    tape.o[j] = sigmoid(z[3 * hidden_ + j]);
    tape.c[j] = tape.f[j] * state.c[j] + tape.i[j] * tape.g[j];
    tape.tanh_c[j] = std::tanh(tape.c[j]);
  }
  state.c = tape.c;
  state.h.resize(hidden_);
  for (int j = 0; j < hidden_; ++j) state.h[j] = tape.o[j] * tape.tanh_c[j];
  return state.h;
}

void LstmCell::backward_step(const StepTape& tape, std::vector<double>& dh,
                             std::vector<double>& dc, std::span<double> dx,
                             std::span<double> grad) const {
  std::vector<double> dz(static_cast<size_t>(4) * hidden_);
  for (int j = 0; j < hidden_; ++j) {
    const double do_ = dh[j] * tape.tanh_c[j];
    const double dcj =
        dh[j] * tape.o[j] * (1 - tape.tanh_c[j] * tape.tanh_c[j]) + dc[j];
    const double di = dcj * tape.g[j];
    const double df = dcj * tape.c_prev[j];
    const double dg = dcj * tape.i[j];
    dz[j] = di * tape.i[j] * (1 - tape.i[j]);
    dz[hidden_ + j] = df * tape.f[j] * (1 - tape.f[j]);
    dz[2 * hidden_ + j] = dg * (1 - tape.g[j] * tape.g[j]);
    dz[3 * hidden_ + j] = do_ * tape.o[j] * (1 - tape.o[j]);
    dc[j] = dcj * tape.f[j];
  }

  double* gwx = grad.data();
  double* gwh = grad.data() + static_cast<size_t>(4) * hidden_ * input_;
  double* gb =
      grad.data() + static_cast<size_t>(4) * hidden_ * (input_ + hidden_);
  std::fill(dx.begin(), dx.end(), 0.0);
  std::vector<double> dh_prev(hidden_, 0.0);
  for (int r = 0; r < 4 * hidden_; ++r) {
    const double d = dz[r];
    gb[r] += d;
    if (d == 0.0) continue;
    double* grx = gwx + static_cast<size_t>(r) * input_;
    const double* rx = wx() + static_cast<size_t>(r) * input_;
    for (int i = 0; i < input_; ++i) {
      grx[i] += d * tape.x[i];
      dx[i] += d * rx[i];
    }
    double* grh = gwh + static_cast<size_t>(r) * hidden_;
    const double* rh = wh() + static_cast<size_t>(r) * hidden_;
    for (int i = 0; i < hidden_; ++i) {
      grh[i] += d * tape.h_prev[i];
      dh_prev[i] += d * rh[i];
    }
  }
  dh = std::move(dh_prev);
}

RecurrentQNet::RecurrentQNet(int input_size, int hidden_layers,
                             int hidden_size, int output_size)
    : trunk_([&] {
        std::vector<int> sizes{input_size};
        for (int i = 0; i < hidden_layers; ++i) sizes.push_back(hidden_size);
        // +1 linear step into the LSTM input
        sizes.push_back(hidden_size);
        return sizes;
      }()),
      lstm_(hidden_size, hidden_size),
      head_({hidden_size, output_size}) {}

RecurrentQNet::State RecurrentQNet::initial_state() const {
  return State{lstm_.initial_state()};
}

size_t RecurrentQNet::param_count() const {
  return trunk_.param_count() + lstm_.param_count() + head_.param_count();
}

std::vector<double> RecurrentQNet::get_params() const {
  std::vector<double> out;
  out.reserve(param_count());
  out.insert(out.end(), trunk_.params().begin(), trunk_.params().end());
  out.insert(out.end(), lstm_.params().begin(), lstm_.params().end());
  out.insert(out.end(), head_.params().begin(), head_.params().end());
  return out;
}

void RecurrentQNet::set_params(std::span<const double> values) {
  if (values.size() != param_count()) {
    throw std::invalid_argument("parameter vector has wrong length");
  }
  size_t off = 0;
  auto assign = [&](std::span<double> dst) {
    std::copy(values.begin() + off, values.begin() + off + dst.size(),
              dst.begin());
    off += dst.size();
  };
  assign(trunk_.params());
  assign(lstm_.params());
  assign(head_.params());
}

void RecurrentQNet::init_uniform(std::uint64_t seed) {
  trunk_.init_uniform(seed);
  lstm_.init_uniform(seed + 1);
  head_.init_uniform(seed + 2);
}

std::vector<double> RecurrentQNet::step(std::span<const double> x,
                                        State& state) const {
  return head_.forward(lstm_.step(trunk_.forward(x), state.lstm));
}

std::vector<std::vector<double>> RecurrentQNet::forward_sequence(
    const std::vector<std::vector<double>>& inputs,
    SequenceTape* tape) const {
  std::vector<std::vector<double>> out;
  out.reserve(inputs.size());
  LstmCell::State state = lstm_.initial_state();
  if (tape) {
    tape->trunk.resize(inputs.size());
    tape->lstm.resize(inputs.size());
    tape->head.resize(inputs.size());
    tape->trunk_out.resize(inputs.size());
  }
  for (size_t t = 0; t < inputs.size(); ++t) {
    if (tape) {
      auto trunk_out = trunk_.forward(inputs[t], tape->trunk[t]);
      tape->trunk_out[t] = trunk_out;
      auto h = lstm_.step(trunk_out, state, tape->lstm[t]);
      out.push_back(head_.forward(h, tape->head[t]));
    } else {
      out.push_back(head_.forward(lstm_.step(trunk_.forward(inputs[t]), state)));
    }
  }
  return out;
}

void RecurrentQNet::backward_sequence(
    const SequenceTape& tape, const std::vector<std::vector<double>>& douts,
    std::span<double> grad) const {
  if (grad.size() != param_count()) {
    throw std::invalid_argument("gradient buffer has wrong length");
  }
  const size_t T = douts.size();
  if (tape.lstm.size() != T) {
    throw std::logic_error("sequence tape does not match gradient sequence");
  }
  std::span<double> g_trunk = grad.subspan(0, trunk_.param_count());
  std::span<double> g_lstm = grad.subspan(trunk_.param_count(),
                                          lstm_.param_count());
  std::span<double> g_head =
      grad.subspan(trunk_.param_count() + lstm_.param_count(),
                   head_.param_count());

  const int H = lstm_.hidden_size();
  std::vector<double> dh(H, 0.0), dc(H, 0.0);
  std::vector<double> dlstm_in(H, 0.0);
  for (size_t ti = T; ti-- > 0;) {
    std::vector<double> dhead_in(H, 0.0);
    head_.backward(tape.head[ti], douts[ti], g_head, dhead_in);
    for (int j = 0; j < H; ++j) dh[j] += dhead_in[j];
    lstm_.backward_step(tape.lstm[ti], dh, dc, dlstm_in, g_lstm);
    std::vector<double> dtrunk_in(trunk_.input_size(), 0.0);
    trunk_.backward(tape.trunk[ti], dlstm_in, g_trunk, dtrunk_in);
  }
}

}  // namespace ptrl::nnkit
