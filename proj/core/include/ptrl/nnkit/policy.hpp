#pragma once

#include <span>
#include <vector>

namespace ptrl::nnkit {

// mm_w(x) = log(mean(exp(w*x_i)))/w, computed with a max shift so large
// inputs cannot overflow. Lies between mean(x) and max(x) and approaches
// max(x) as w grows.
double mellowmax(std::span<const double> x, double omega);

// Standard exponential normalization with max shift.
std::vector<double> softmax(std::span<const double> logits);

double entropy(std::span<const double> probs);

enum class PolicyKind { Softmax, Mellowmax };

struct PolicyHead {
  PolicyKind kind = PolicyKind::Softmax;
  double omega = 1.0;  // mellowmax sharpness; unused for softmax
};

// A distribution over actions plus the temperature-like multiplier that
// produced it: probs = softmax(logit_scale * logits). Softmax heads use
// scale 1; mellowmax heads solve for the maximum-entropy multiplier beta
// whose induced distribution has expected logit equal to mm_w(logits).
struct PolicyDistribution {
  std::vector<double> probs;
  double logit_scale = 1.0;
};

PolicyDistribution policy_distribution_ex(const PolicyHead& head,
                                          std::span<const double> logits);
std::vector<double> policy_distribution(const PolicyHead& head,
                                        std::span<const double> logits);

// Maximum-entropy multiplier for the mellowmax policy: the beta with
// sum_i softmax(beta*q)_i * q_i = 0 where q = logits - mm_w(logits).
// Bracketed bisection to 1e-10 residual; throws after 200 iterations.
double mellowmax_beta(std::span<const double> logits, double omega);

// d/dlogits of [log p(a) * advantage + entropy_coef * H(p)] for
// p = softmax(scale * logits). The multiplier of a mellowmax head is treated
// as a constant of the current logits.
std::vector<double> policy_objective_grad(std::span<const double> probs,
                                          double scale, int action,
                                          double advantage,
                                          double entropy_coef);

}  // namespace ptrl::nnkit
