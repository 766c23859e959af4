#pragma once

#include <string>
#include <vector>

#include "ptrl/simenv.hpp"

namespace ptrl::harness {

// Exact optimum for one permutation, found by exhaustive search.
struct OracleResult {
  bool solvable = false;
  double max_reward = 0;       // best achievable episode reward
  int min_actions = 0;         // shortest solving action sequence
  double reward_at_min = 0;    // best reward among min-length solves
  std::vector<int> best_path;  // action indices of one max-reward solve
};

// Depth-first search over action sequences with memoization on the canonical
// knowledge fingerprint and domination pruning: an action that leaves the
// knowledge unchanged only burns reward and is never part of an optimum, so
// such branches are cut. Every surviving action strictly grows the monotone
// fact set, which keeps solving paths far below the 100-step budget and
// makes the memo key sound without a step counter.
OracleResult oracle(const simenv::AttackEnv& env);
OracleResult oracle(const scenario::Scenario& s);

struct OracleScenarioReport {
  std::string scenario;
  std::vector<OracleResult> per_permutation;

  bool permutation_invariant() const;  // same optimum for all permutations
  const OracleResult& representative() const { return per_permutation.front(); }
};

// Optimum for all 24 permutations of a scenario.
OracleScenarioReport oracle_all_permutations(const scenario::Scenario& s);

}  // namespace ptrl::harness
