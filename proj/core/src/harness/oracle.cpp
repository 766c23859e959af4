#include "ptrl/harness/oracle.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace ptrl::harness {

namespace {

constexpr int kUnsolvable = std::numeric_limits<int>::max() / 2;

struct Entry {
  bool solvable = false;
  double max_reward = -std::numeric_limits<double>::infinity();
  int min_actions = kUnsolvable;
  double reward_at_min = -std::numeric_limits<double>::infinity();
  int best_action = -1;  // first action of a max-reward continuation
};

class Search {
 public:
  explicit Search(const simenv::AttackEnv& root) : root_(root) {}

  OracleResult run() {
    const Entry& e = solve(root_);
    OracleResult out;
    out.solvable = e.solvable;
    if (!e.solvable) return out;
    out.max_reward = e.max_reward;
    out.min_actions = e.min_actions;
    out.reward_at_min = e.reward_at_min;

    // reconstruct one max-reward path by replay
    simenv::AttackEnv env = root_;
    while (!env.solved()) {
      const Entry& cur = memo_.at(env.knowledge().canonical_key());
      out.best_path.push_back(cur.best_action);
      env.step(cur.best_action);
    }
    return out;
  }

 private:
  const Entry& solve(const simenv::AttackEnv& env) {
    const std::string key = env.knowledge().canonical_key();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Entry entry;
    if (env.solved()) {
      entry.solvable = true;
      entry.max_reward = 0;
      entry.min_actions = 0;
      entry.reward_at_min = 0;
      return memo_.emplace(key, entry).first->second;
    }

    for (int a = 0; a < env.action_count(); ++a) {
      simenv::AttackEnv child = env;
      const auto out = child.step(a);
      if (!out.solved && child.knowledge().canonical_key() == key) {
        continue;  // pure cost, dominated
      }
      const Entry& sub = solve(child);
      if (!sub.solvable) continue;
      entry.solvable = true;
      const double reward = out.reward + sub.max_reward;
      if (reward > entry.max_reward) {
        entry.max_reward = reward;
        entry.best_action = a;
      }
      const int actions = 1 + sub.min_actions;
      const double reward_min = out.reward + sub.reward_at_min;
      if (actions < entry.min_actions ||
          (actions == entry.min_actions && reward_min > entry.reward_at_min)) {
        entry.min_actions = actions;
        entry.reward_at_min = reward_min;
      }
    }
    return memo_.emplace(key, std::move(entry)).first->second;
  }

  simenv::AttackEnv root_;
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace

OracleResult oracle(const simenv::AttackEnv& env) { return Search(env).run(); }

OracleResult oracle(const scenario::Scenario& s) {
  return oracle(simenv::AttackEnv(s));
}

bool OracleScenarioReport::permutation_invariant() const {
  for (const auto& r : per_permutation) {
    if (r.solvable != per_permutation.front().solvable ||
        std::abs(r.max_reward - per_permutation.front().max_reward) > 1e-9 ||
        r.min_actions != per_permutation.front().min_actions) {
      return false;
    }
  }
  return true;
}

OracleScenarioReport oracle_all_permutations(const scenario::Scenario& s) {
  OracleScenarioReport report;
  report.scenario = s.name;
  for (const auto& perm : scenario::enumerate_permutations(s)) {
    report.per_permutation.push_back(oracle(perm));
  }
  return report;
}

}  // namespace ptrl::harness
