#pragma once

#include <string>
#include <vector>

#include "ptrl/simenv.hpp"

namespace ptrl::baseline {

// Phases of the scripted execution chain. Each phase is applied to every
// reachable and discovered node (ascending host index) before the chain
// advances.
enum class Phase {
  InitialExploit,
  ServiceScan,
  OsScan,
  VulnScan,
  Exploit,
  Wiretap,
  UseCredentials,
  CrackHash,
};

using ExecutionChain = std::vector<Phase>;

// initial exploit, the three scans, matched exploits, wiretap, then the two
// credential phases with a second login pass after cracking.
ExecutionChain default_chain();

const char* phase_name(Phase p);

// One phase name per line; '#' starts a comment.
ExecutionChain parse_chain(const std::string& text);
ExecutionChain load_chain_file(const std::string& path);
std::string serialize_chain(const ExecutionChain& chain);

struct BaselineEpisode {
  bool solved = false;
  double reward = 0;
  std::int64_t actions = 0;
  std::vector<int> action_indices;  // canonical catalog indices, in order
};

// Runs the chain against one scenario permutation. Deterministic: equal
// scenarios produce identical traces. Within a phase only applicable targets
// are visited: exploits fire solely where their service was observed, logins
// solely on hosts with an observed login service while an untried credential
// is held, hash cracking once per compromised host.
BaselineEpisode run_baseline(const scenario::Scenario& s,
                             const ExecutionChain& chain = default_chain());

struct BaselineResult {
  std::string scenario;
  std::vector<BaselineEpisode> per_permutation;

  int solve_count() const;
  double solve_fraction() const;
  double avg_reward() const;
  double avg_actions() const;
};

// Chain against all 24 permutations.
BaselineResult run_baseline_all(const scenario::Scenario& s,
                                const ExecutionChain& chain = default_chain());

}  // namespace ptrl::baseline
