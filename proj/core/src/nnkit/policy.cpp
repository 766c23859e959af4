#include "ptrl/nnkit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptrl::nnkit {

double mellowmax(std::span<const double> x, double omega) {
  if (x.empty()) throw std::invalid_argument("mellowmax of empty vector");
  if (!(omega > 0)) throw std::invalid_argument("mellowmax needs omega > 0");
  const double m = *std::max_element(x.begin(), x.end());
  double sum = 0;
  for (double v : x) sum += std::exp(omega * (v - m));
  return m + std::log(sum / static_cast<double>(x.size())) / omega;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double entropy(std::span<const double> probs) {
  double h = 0;
  for (double p : probs) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

namespace {

// Mean of q under softmax(beta*q); monotone non-decreasing in beta.
double expected_q(std::span<const double> q, double beta) {
  double m = q[0] * beta;
  for (double v : q) m = std::max(m, beta * v);
  double num = 0, den = 0;
  for (double v : q) {
    const double w = std::exp(beta * v - m);
    num += w * v;
    den += w;
  }
  return num / den;
}

}  // namespace

double mellowmax_beta(std::span<const double> logits, double omega) {
  for (double v : logits) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("mellowmax policy: non-finite logits");
    }
  }
  const double mm = mellowmax(logits, omega);
  std::vector<double> q(logits.size());
  double spread = 0;
  for (size_t i = 0; i < logits.size(); ++i) {
    q[i] = logits[i] - mm;
    spread = std::max(spread, std::abs(q[i]));
  }
  if (spread < 1e-12) return 0.0;  // constant logits: uniform is exact

  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 200;
  // expected_q(0) = mean(q) <= 0 and expected_q(beta) -> max(q) >= 0, so a
  // root is bracketed by [0, hi] once expected_q(hi) is positive.
  double lo = 0.0, hi = 1.0;
  int iter = 0;
  while (expected_q(q, hi) < 0) {
    lo = hi;
    hi *= 2;
    if (++iter >= kMaxIter) {
      throw std::runtime_error(
          "mellowmax policy: no bracket after 200 expansions");
    }
  }
  double beta = hi;
  for (iter = 0; iter < kMaxIter; ++iter) {
    beta = 0.5 * (lo + hi);
    const double r = expected_q(q, beta);
    if (std::abs(r) <= kTol) return beta;
    (r < 0 ? lo : hi) = beta;
  }
  const double r = expected_q(q, beta);
  if (std::abs(r) <= 1e-8) return beta;  // bisection stalled inside a flat
  throw std::runtime_error(
      "mellowmax policy: root finding did not converge in 200 iterations");
}

PolicyDistribution policy_distribution_ex(const PolicyHead& head,
                                          std::span<const double> logits) {
  PolicyDistribution out;
  if (head.kind == PolicyKind::Softmax) {
    out.probs = softmax(logits);
    out.logit_scale = 1.0;
    return out;
  }
  const double beta = mellowmax_beta(logits, head.omega);
  std::vector<double> scaled(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) scaled[i] = beta * logits[i];
  out.probs = softmax(scaled);
  out.logit_scale = beta;
  return out;
}

std::vector<double> policy_distribution(const PolicyHead& head,
                                        std::span<const double> logits) {
  return policy_distribution_ex(head, logits).probs;
}

std::vector<double> policy_objective_grad(std::span<const double> probs,
                                          double scale, int action,
                                          double advantage,
                                          double entropy_coef) {
  if (action < 0 || action >= static_cast<int>(probs.size())) {
    throw std::out_of_range("action index out of range");
  }
  const double h = entropy(probs);
  std::vector<double> grad(probs.size());
  for (size_t j = 0; j < probs.size(); ++j) {
    const double p = probs[j];
    double g = -advantage * p;
    if (static_cast<int>(j) == action) g += advantage;
    if (p > 0) g -= entropy_coef * p * (std::log(p) + h);
    grad[j] = scale * g;
  }
  return grad;
}

}  // namespace ptrl::nnkit
