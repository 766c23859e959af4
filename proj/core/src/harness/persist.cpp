#include "ptrl/harness/persist.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "ptrl/scenario_io.hpp"

namespace ptrl::harness {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

std::string environment_version_hash() {
  std::string blob;
  for (const auto& s : {scenario::build_scenario_a(),
                        scenario::build_scenario_b(),
                        scenario::build_scenario_c()}) {
    blob += scenario::serialize_scenario(s);
  }
  const auto catalog = simenv::ActionCatalog::standard();
  for (int i = 0; i < catalog->size(); ++i) blob += catalog->describe(i) + ";";
  const auto layout = simenv::ObservationLayout::standard();
  for (const auto& s : layout->services()) blob += s + ",";
  for (const auto& s : layout->oses()) blob += s + ",";
  for (const auto& s : layout->vulns()) blob += s + ",";
  const simenv::RewardModel rm;
  blob += std::to_string(rm.exploit_cost) + std::to_string(rm.post_exploit_cost) +
          std::to_string(rm.initial_exploit_cost) + std::to_string(rm.scan_cost) +
          std::to_string(rm.wiretap_cost) + std::to_string(rm.compromise_bonus) +
          std::to_string(rm.entry_bonus);
  return to_hex(fnv1a(blob));
}

void write_ranked_csv(const std::string& path, const SearchResult& result) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write ranked csv '" + path + "'");
  f << "rank,config_index,solved,permutations,solve_fraction,avg_reward,"
       "avg_actions,config\n";
  int rank = 1;
  for (const auto& r : result.ranked) {
    std::string config = r.config.to_json().dump();
    std::string quoted = "\"";
    for (char c : config) {
      if (c == '"') quoted += "\"\"";
      else quoted += c;
    }
    quoted += "\"";
    f << rank++ << ',' << r.config_index << ',' << r.report.solved_count()
      << ',' << r.report.rows.size() << ',' << r.report.solve_fraction() << ','
      << r.report.avg_reward() << ',' << r.report.avg_actions() << ','
      << quoted << "\n";
  }
}

void write_curve_csv(const std::string& path,
                     const agents::LearningCurve& curve) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write curve csv '" + path + "'");
  f << "step,permutation,reward,actions,solved\n";
  for (const auto& p : curve) {
    f << p.step << ',' << p.permutation << ',' << p.reward << ',' << p.actions
      << ',' << (p.solved ? 1 : 0) << "\n";
  }
}

agents::LearningCurve read_curve_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read curve csv '" + path + "'");
  agents::LearningCurve curve;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    agents::CurvePoint p;
    char comma;
    int solved_int = 0;
    std::istringstream row(line);
    row >> p.step >> comma >> p.permutation >> comma >> p.reward >> comma >>
        p.actions >> comma >> solved_int;
    p.solved = solved_int != 0;
    curve.push_back(p);
  }
  return curve;
}

void write_manifest(const std::string& path, const nlohmann::json& manifest) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write manifest '" + path + "'");
  f << manifest.dump(2) << "\n";
}

nlohmann::json read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read manifest '" + path + "'");
  nlohmann::json j;
  f >> j;
  return j;
}

std::string ComparisonTable::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  for (const auto& block : blocks) {
    os << "Scenario " << block.scenario
       << "  (positive ceiling " << block.positive_ceiling << ")\n";
    os << "  " << std::left << std::setw(28) << "attacker" << std::right
       << std::setw(9) << "solve" << std::setw(13) << "avg reward"
       << std::setw(13) << "avg actions" << "\n";
    for (const auto& e : block.entries) {
      os << "  " << std::left << std::setw(28) << e.label << std::right
         << std::setw(6) << e.solved << "/" << e.total << std::setw(13)
         << e.avg_reward << std::setw(13) << e.avg_actions << "\n";
    }
    if (block.oracle_optimum) {
      os << "  " << std::left << std::setw(28) << "optimum (search)"
         << std::right << std::setw(9) << "-" << std::setw(13)
         << block.oracle_optimum->max_reward << std::setw(13)
         << block.oracle_optimum->min_actions << "\n";
      if (block.reference) {
        os << "  " << std::left << std::setw(28) << "reference"
           << std::right << std::setw(9) << "-" << std::setw(13)
           << block.reference->max_reward << std::setw(13)
           << block.reference->min_actions << "\n";
        os << "  " << std::left << std::setw(28) << "delta vs reference"
           << std::right << std::setw(9) << "-" << std::setw(13)
           << block.oracle_optimum->max_reward - block.reference->max_reward
           << std::setw(13)
           << block.oracle_optimum->min_actions - block.reference->min_actions
           << "\n";
      }
    }
    os << "\n";
  }
  return os.str();
}

nlohmann::json baseline_result_to_json(const baseline::BaselineResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : r.per_permutation) {
    rows.push_back(nlohmann::json{{"solved", e.solved},
                                  {"reward", e.reward},
                                  {"actions", e.actions},
                                  {"trace", e.action_indices}});
  }
  return nlohmann::json{{"scenario", r.scenario}, {"permutations", rows}};
}

baseline::BaselineResult baseline_result_from_json(const nlohmann::json& j) {
  baseline::BaselineResult r;
  r.scenario = j.at("scenario").get<std::string>();
  for (const auto& row : j.at("permutations")) {
    baseline::BaselineEpisode e;
    e.solved = row.at("solved").get<bool>();
    e.reward = row.at("reward").get<double>();
    e.actions = row.at("actions").get<std::int64_t>();
    e.action_indices = row.value("trace", std::vector<int>{});
    r.per_permutation.push_back(std::move(e));
  }
  return r;
}

nlohmann::json oracle_report_to_json(const OracleScenarioReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& o : r.per_permutation) {
    rows.push_back(nlohmann::json{{"solvable", o.solvable},
                                  {"max_reward", o.max_reward},
                                  {"min_actions", o.min_actions},
                                  {"reward_at_min", o.reward_at_min},
                                  {"best_path", o.best_path}});
  }
  return nlohmann::json{{"scenario", r.scenario}, {"permutations", rows}};
}

OracleScenarioReport oracle_report_from_json(const nlohmann::json& j) {
  OracleScenarioReport r;
  r.scenario = j.at("scenario").get<std::string>();
  for (const auto& row : j.at("permutations")) {
    OracleResult o;
    o.solvable = row.at("solvable").get<bool>();
    o.max_reward = row.at("max_reward").get<double>();
    o.min_actions = row.at("min_actions").get<int>();
    o.reward_at_min = row.at("reward_at_min").get<double>();
    o.best_path = row.value("best_path", std::vector<int>{});
    r.per_permutation.push_back(std::move(o));
  }
  return r;
}

std::map<std::string, ReferenceAnchor> load_reference_anchors(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read reference file '" + path + "'");
  nlohmann::json j;
  f >> j;
  std::map<std::string, ReferenceAnchor> out;
  for (const auto& [name, anchor] : j.at("anchors").items()) {
    out[name] = ReferenceAnchor{anchor.at("max_reward").get<double>(),
                                anchor.at("min_actions").get<int>()};
  }
  return out;
}

ComparisonTable compare(
    const std::vector<baseline::BaselineResult>& baselines,
    const std::vector<std::pair<std::string, EvalReport>>& agent_reports,
    const std::vector<OracleScenarioReport>* oracles,
    const std::map<std::string, ReferenceAnchor>* references) {
  ComparisonTable table;
  for (const auto& b : baselines) {
    ComparisonBlock block;
    block.scenario = b.scenario;
    const size_t perm_count = b.per_permutation.size();
    block.entries.push_back(ComparisonEntry{
        "baseline (decision chain)", b.solve_count(),
        static_cast<int>(perm_count), b.avg_reward(), b.avg_actions()});
    for (const auto& [label, report] : agent_reports) {
      if (report.scenario != b.scenario) continue;
      if (report.rows.size() != perm_count) {
        throw std::invalid_argument(
            "agent report for scenario " + b.scenario +
            " covers a different permutation set than the baseline");
      }
      block.entries.push_back(ComparisonEntry{
          label, report.solved_count(), static_cast<int>(report.rows.size()),
          report.avg_reward(), report.avg_actions()});
    }
    if (oracles != nullptr) {
      for (const auto& o : *oracles) {
        if (o.scenario == b.scenario && !o.per_permutation.empty()) {
          block.oracle_optimum = o.representative();
        }
      }
    }
    if (references != nullptr) {
      auto it = references->find(b.scenario);
      if (it != references->end()) block.reference = it->second;
    }
    if (auto preset = scenario::preset_by_name(b.scenario)) {
      block.positive_ceiling = simenv::max_positive_reward(*preset);
    }
    table.blocks.push_back(std::move(block));
  }
  return table;
}

}  // namespace ptrl::harness
