#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptrl/action.hpp"
#include "ptrl/observation.hpp"
#include "ptrl/scenario.hpp"

namespace ptrl::simenv {

// Per-action costs and compromise bonuses. A step's reward is its action
// cost plus the bonuses of whatever that action newly compromised.
struct RewardModel {
  double exploit_cost = -3;
  double post_exploit_cost = -3;  // crack_hash, use_credentials
  double initial_exploit_cost = -1;
  double scan_cost = -1;
  double wiretap_cost = -1;
  double compromise_bonus = 100;
  double entry_bonus = 50;

  double cost(ActionVerb verb) const;
};

struct StepOutcome {
  KnowledgeState observation;
  double reward = 0;
  bool done = false;
  bool solved = false;
  std::vector<int> newly_compromised;  // host positions
  bool entry_newly_compromised = false;
};

// Deterministic attack simulation over a hidden ground-truth scenario.
//
// Action semantics:
//   initial_exploit  before the entry host is owned: compromises it and makes
//                    every target host discovered and reachable. Afterwards a
//                    costed no-op.
//   service/os/vuln scan  resolve the target's tri-states (reachable targets
//                    only). Scanning an empty host is legal and reveals
//                    absence.
//   wiretap          adds the subnet's wiretap credentials to the held set;
//                    which target the tap is placed on makes no difference.
//   exploit          works iff the target is reachable, the exploited service
//                    has been OBSERVED present there (no blind firing), the
//                    exploit's required vulnerability actually exists on the
//                    host (knowledge of it is not needed), and the exploit is
//                    a working one.
//   crack_hash       on a compromised host with lootable hashes, adds those
//                    credentials to the held set.
//   use_credentials  logs into a reachable, service-scanned host whose access
//                    credential is held; compromises it.
// Ineffective actions still pay their cost and change nothing. An episode is
// done when every compromisable host plus the entry point is owned, or after
// step_limit steps. Stepping a finished episode throws.
class AttackEnv {
 public:
  explicit AttackEnv(
      scenario::Scenario s,
      std::shared_ptr<const ActionCatalog> catalog = ActionCatalog::standard(),
      std::shared_ptr<const ObservationLayout> layout =
          ObservationLayout::standard(),
      RewardModel rewards = RewardModel{});

  const KnowledgeState& reset();
  StepOutcome step(const Action& action);
  StepOutcome step(int action_index);

  bool done() const { return done_; }
  bool solved() const { return solved_; }
  const KnowledgeState& knowledge() const { return knowledge_; }
  const scenario::Scenario& scenario() const { return *scenario_; }
  const ActionCatalog& catalog() const { return *catalog_; }
  const ObservationLayout& layout() const { return *layout_; }
  const RewardModel& rewards() const { return rewards_; }

  int observation_size() const { return layout_->total_slots(); }
  int action_count() const { return catalog_->size(); }

  // Environments are value types: copy to fork a search branch or to hand an
  // independent instance to another thread. The ground truth is immutable
  // and shared between copies, so cloning only duplicates the knowledge.

 private:
  struct HostTruth {
    std::uint32_t service_mask = 0;
    std::uint32_t vuln_mask = 0;
    int os_index = -1;
    CredentialSet lootable;
    std::optional<int> access_cred;
    bool compromisable = false;
  };
  struct ExploitTruth {
    int service_index = -1;
    int vuln_index = -1;  // -1: no vulnerability required
    bool success = false;
    bool defined = false;  // scenario ships this exploit at all
  };

  void apply_scan(int host, ActionVerb verb);
  void compromise(int host, StepOutcome& out);
  void refresh_done();

  std::shared_ptr<const scenario::Scenario> scenario_;
  std::shared_ptr<const ActionCatalog> catalog_;
  std::shared_ptr<const ObservationLayout> layout_;
  RewardModel rewards_;

  std::vector<HostTruth> truth_;
  std::vector<ExploitTruth> exploit_truth_;  // by catalog exploit index
  CredentialSet subnet_wiretap_;
  int compromisable_total_ = 0;

  KnowledgeState knowledge_;
  int compromised_count_ = 0;
  bool done_ = false;
  bool solved_ = false;
};

// Returns the positive reward ceiling: entry bonus plus one compromise bonus
// per compromisable host.
double max_positive_reward(const scenario::Scenario& s,
                           const RewardModel& rewards = RewardModel{});

// Rotation policy over a list of environments (one per permutation).
// Fixed-order rotation serves the single-threaded learners; asynchronous
// workers each draw their own residue class so no two workers share an
// instance.
class EnvironmentPool {
 public:
  EnvironmentPool(std::vector<scenario::Scenario> permutations,
                  std::shared_ptr<const ActionCatalog> catalog =
                      ActionCatalog::standard(),
                  std::shared_ptr<const ObservationLayout> layout =
                      ObservationLayout::standard());

  // All 24 permutations of one scenario.
  static EnvironmentPool stage1(const scenario::Scenario& s);
  // All 72 permutations of the three presets.
  static EnvironmentPool stage2();

  size_t size() const { return permutations_.size(); }
  const scenario::Scenario& permutation(size_t index) const {
    return permutations_[index];
  }
  AttackEnv make_env(size_t index) const;

  // Fixed cyclic rotation: the pool's cursor advances by one per call.
  size_t next_index();
  AttackEnv next();

  // Index for asynchronous worker `worker` on its `round`-th episode:
  // worker, worker + W, worker + 2W, ... (mod size). With as many workers as
  // permutations each worker keeps one permutation.
  size_t worker_index(int worker, int worker_count, std::uint64_t round) const;

  std::shared_ptr<const ActionCatalog> catalog() const { return catalog_; }
  std::shared_ptr<const ObservationLayout> layout() const { return layout_; }

 private:
  std::vector<scenario::Scenario> permutations_;
  std::shared_ptr<const ActionCatalog> catalog_;
  std::shared_ptr<const ObservationLayout> layout_;
  size_t cursor_ = 0;
};

// Episode trace export: one CSV row per step, stable format
// `step,action,verb,target,reward,done`.
class TraceWriter {
 public:
  void record(int step, int action_index, const ActionCatalog& catalog,
              double reward, bool done);
  void clear() { rows_.clear(); }
  const std::vector<std::string>& rows() const { return rows_; }
  std::string to_csv() const;  // includes the header line
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> rows_;
};

}  // namespace ptrl::simenv
