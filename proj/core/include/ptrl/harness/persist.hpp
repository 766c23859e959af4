#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ptrl/agents/agent.hpp"
#include "ptrl/baseline.hpp"
#include "ptrl/harness/oracle.hpp"
#include "ptrl/harness/search.hpp"

namespace ptrl::harness {

std::uint64_t fnv1a(std::string_view data);
std::string to_hex(std::uint64_t value);

// Stable fingerprint of the simulation: preset scenarios, action catalog,
// observation layout and reward constants. Recorded in run manifests so
// results can be traced to the environment that produced them.
std::string environment_version_hash();

// ranked results, one row per grid configuration
void write_ranked_csv(const std::string& path, const SearchResult& result);

// learning curve CSV: step,permutation,reward,actions,solved
void write_curve_csv(const std::string& path,
                     const agents::LearningCurve& curve);
agents::LearningCurve read_curve_csv(const std::string& path);

void write_manifest(const std::string& path, const nlohmann::json& manifest);
nlohmann::json read_manifest(const std::string& path);

// The comparison table mirrors the familiar layout: per scenario one row per
// attacker (baseline and agents) with solve count, average reward and
// average actions, the search optimum, and optional external reference
// values with their deltas.
struct ReferenceAnchor {
  double max_reward = 0;
  int min_actions = 0;
};

struct ComparisonEntry {
  std::string label;
  int solved = 0;
  int total = 0;
  double avg_reward = 0;
  double avg_actions = 0;
};

struct ComparisonBlock {
  std::string scenario;
  std::vector<ComparisonEntry> entries;
  std::optional<OracleResult> oracle_optimum;
  std::optional<ReferenceAnchor> reference;
  double positive_ceiling = 0;
};

struct ComparisonTable {
  std::vector<ComparisonBlock> blocks;
  std::string to_text() const;
};

// Joins baseline results and agent reports by scenario name. All reports of
// one scenario must cover the same permutation count; mismatches throw.
ComparisonTable compare(
    const std::vector<baseline::BaselineResult>& baselines,
    const std::vector<std::pair<std::string, EvalReport>>& agent_reports,
    const std::vector<OracleScenarioReport>* oracles = nullptr,
    const std::map<std::string, ReferenceAnchor>* references = nullptr);

nlohmann::json baseline_result_to_json(const baseline::BaselineResult& r);
baseline::BaselineResult baseline_result_from_json(const nlohmann::json& j);
nlohmann::json oracle_report_to_json(const OracleScenarioReport& r);
OracleScenarioReport oracle_report_from_json(const nlohmann::json& j);

// Reads data/reference.json ({"anchors": {"A": {"max_reward":..,
// "min_actions":..}, ...}}).
std::map<std::string, ReferenceAnchor> load_reference_anchors(
    const std::string& path);

}  // namespace ptrl::harness
