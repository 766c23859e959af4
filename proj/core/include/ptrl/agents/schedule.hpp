#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ptrl::agents {

// Linear exploration decay from start (1.0) down to `final_epsilon` over
// `horizon` steps, clamped afterwards.
struct EpsilonSchedule {
  double start = 1.0;
  double final_epsilon = 0.1;
  std::int64_t horizon = 1;

  double current(std::int64_t step) const {
    if (horizon <= 0 || step >= horizon) return final_epsilon;
    if (step <= 0) return start;
    const double frac = static_cast<double>(step) / static_cast<double>(horizon);
    return start + (final_epsilon - start) * frac;
  }
};

// Lowest index among maximal entries; deterministic evaluation depends on
// this tie-break.
inline int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// With probability epsilon a uniformly random index, otherwise the greedy
// argmax.
inline int epsilon_greedy(std::span<const double> values, double epsilon,
                          std::mt19937_64& rng) {
  if (epsilon > 0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<int> pick(
          0, static_cast<int>(values.size()) - 1);
      return pick(rng);
    }
  }
  return argmax_lowest(values);
}

}  // namespace ptrl::agents
