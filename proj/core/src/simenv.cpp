#include "ptrl/simenv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ptrl::simenv {

double RewardModel::cost(ActionVerb verb) const {
  switch (verb) {
    case ActionVerb::InitialExploit: return initial_exploit_cost;
    case ActionVerb::Wiretap: return wiretap_cost;
    case ActionVerb::ServiceScan:
    case ActionVerb::OsScan:
    case ActionVerb::VulnScan: return scan_cost;
    case ActionVerb::CrackHash:
    case ActionVerb::UseCredentials: return post_exploit_cost;
    case ActionVerb::Exploit: return exploit_cost;
  }
  return 0;
}

AttackEnv::AttackEnv(scenario::Scenario s,
                     std::shared_ptr<const ActionCatalog> catalog,
                     std::shared_ptr<const ObservationLayout> layout,
                     RewardModel rewards)
    : scenario_(std::make_shared<const scenario::Scenario>(std::move(s))),
      catalog_(std::move(catalog)),
      layout_(std::move(layout)),
      rewards_(rewards) {
  scenario::validate(*scenario_);

  truth_.resize(scenario_->hosts.size());
  for (size_t h = 0; h < scenario_->hosts.size(); ++h) {
    const auto& host = scenario_->hosts[h];
    auto& t = truth_[h];
    for (const auto& svc : host.services) {
      int idx = layout_->service_index(svc);
      if (idx < 0) {
        throw std::invalid_argument("service '" + svc +
                                    "' is not in the observation layout");
      }
      t.service_mask |= 1u << idx;
    }
    for (const auto& v : host.vulns) {
      int idx = layout_->vuln_index(v);
      if (idx < 0) {
        throw std::invalid_argument("vulnerability '" + v +
                                    "' is not in the observation layout");
      }
      t.vuln_mask |= 1u << idx;
    }
    if (host.os) {
      t.os_index = layout_->os_index(*host.os);
      if (t.os_index < 0) {
        throw std::invalid_argument("os '" + *host.os +
                                    "' is not in the observation layout");
      }
    }
    t.lootable = host.lootable_creds;
    t.access_cred = host.access_cred;
    t.compromisable = host.compromisable;
  }
  compromisable_total_ = scenario_->compromisable_count();
  subnet_wiretap_ = scenario_->wiretap_union();

  exploit_truth_.resize(catalog_->exploit_count());
  for (int e = 0; e < catalog_->exploit_count(); ++e) {
    const scenario::ExploitDef* def =
        scenario_->find_exploit(catalog_->exploit_id(e));
    auto& t = exploit_truth_[e];
    if (!def) continue;  // the action exists everywhere; here it never works
    t.defined = true;
    t.success = def->success;
    t.service_index = layout_->service_index(def->target_service);
    if (def->requires_vuln) {
      t.vuln_index = layout_->vuln_index(*def->requires_vuln);
      if (t.vuln_index < 0) {
        throw std::invalid_argument("vulnerability '" + *def->requires_vuln +
                                    "' is not in the observation layout");
      }
    }
  }

  reset();
}

const KnowledgeState& AttackEnv::reset() {
  knowledge_ = KnowledgeState(layout_);
  compromised_count_ = 0;
  done_ = false;
  solved_ = false;
  return knowledge_;
}

void AttackEnv::apply_scan(int host, ActionVerb verb) {
  const HostTruth& t = truth_[host];
  auto set = [&](int offset, bool present) {
    knowledge_.slot(host, offset) = present ? 1 : 0;
  };
  switch (verb) {
    case ActionVerb::ServiceScan:
      for (int s = 0; s < layout_->service_count(); ++s) {
        set(layout_->service_slot(s), t.service_mask & (1u << s));
      }
      break;
    case ActionVerb::OsScan:
      for (int o = 0; o < layout_->os_count(); ++o) {
        set(layout_->os_slot(o), t.os_index == o);
      }
      break;
    case ActionVerb::VulnScan:
      for (int v = 0; v < layout_->vuln_count(); ++v) {
        set(layout_->vuln_slot(v), t.vuln_mask & (1u << v));
      }
      break;
    default: break;
  }
}

void AttackEnv::compromise(int host, StepOutcome& out) {
  knowledge_.set_flag(host, layout_->compromised_slot());
  ++compromised_count_;
  out.reward += rewards_.compromise_bonus;
  out.newly_compromised.push_back(host);
}

void AttackEnv::refresh_done() {
  solved_ = knowledge_.entry_compromised() &&
            compromised_count_ >= compromisable_total_;
  done_ = solved_ || knowledge_.steps_taken() >= scenario_->step_limit;
}

StepOutcome AttackEnv::step(int action_index) {
  return step(catalog_->at(action_index));
}

StepOutcome AttackEnv::step(const Action& action) {
  if (done_) {
    throw std::logic_error(
        "step() called on a finished episode; reset() first");
  }
  if (verb_is_targeted(action.verb) &&
      (action.target < 0 || action.target >= scenario::kTargetHostCount)) {
    throw std::out_of_range("action target out of range");
  }

  knowledge_.steps_ += 1;
  StepOutcome out;
  out.reward = rewards_.cost(action.verb);

  const int t = action.target;
  switch (action.verb) {
    case ActionVerb::InitialExploit:
      if (!knowledge_.entry_compromised()) {
        knowledge_.set_entry();
        out.reward += rewards_.entry_bonus;
        out.entry_newly_compromised = true;
        for (int h = 0; h < scenario::kTargetHostCount; ++h) {
          knowledge_.set_flag(h, layout_->discovered_slot());
          knowledge_.set_flag(h, layout_->reachable_slot());
        }
      }
      break;

    case ActionVerb::Wiretap:
      if (knowledge_.entry_compromised()) {
        for (int id : subnet_wiretap_.values()) knowledge_.set_cred(id);
      }
      break;

    case ActionVerb::ServiceScan:
    case ActionVerb::OsScan:
    case ActionVerb::VulnScan:
      if (knowledge_.reachable(t)) apply_scan(t, action.verb);
      break;

    case ActionVerb::CrackHash:
      if (knowledge_.compromised(t) && !truth_[t].lootable.empty()) {
        for (int id : truth_[t].lootable.values()) knowledge_.set_cred(id);
      }
      break;

    case ActionVerb::UseCredentials:
      if (knowledge_.reachable(t) && !knowledge_.compromised(t) &&
          knowledge_.services_revealed(t) && truth_[t].access_cred &&
          knowledge_.held_creds().contains(
              CredentialId(*truth_[t].access_cred))) {
        compromise(t, out);
      }
      break;

    case ActionVerb::Exploit: {
      if (action.exploit_index < 0 ||
          action.exploit_index >= catalog_->exploit_count()) {
        throw std::out_of_range("exploit index out of range");
      }
      const ExploitTruth& e = exploit_truth_[action.exploit_index];
      if (e.defined && e.success && knowledge_.reachable(t) &&
          !knowledge_.compromised(t) &&
          knowledge_.service_state(t, e.service_index) == Fact::Present &&
          (e.vuln_index < 0 || (truth_[t].vuln_mask & (1u << e.vuln_index)))) {
        compromise(t, out);
      }
      break;
    }
  }

  refresh_done();
  out.done = done_;
  out.solved = solved_;
  out.observation = knowledge_;
  return out;
}

double max_positive_reward(const scenario::Scenario& s,
                           const RewardModel& rewards) {
  return rewards.entry_bonus + rewards.compromise_bonus *
                                   static_cast<double>(s.compromisable_count());
}

EnvironmentPool::EnvironmentPool(
    std::vector<scenario::Scenario> permutations,
    std::shared_ptr<const ActionCatalog> catalog,
    std::shared_ptr<const ObservationLayout> layout)
    : permutations_(std::move(permutations)),
      catalog_(std::move(catalog)),
      layout_(std::move(layout)) {
  if (permutations_.empty()) {
    throw std::invalid_argument("environment pool must not be empty");
  }
}

EnvironmentPool EnvironmentPool::stage1(const scenario::Scenario& s) {
  return EnvironmentPool(scenario::enumerate_permutations(s));
}

EnvironmentPool EnvironmentPool::stage2() {
  std::vector<scenario::Scenario> all;
  for (const auto& s : {scenario::build_scenario_a(),
                        scenario::build_scenario_b(),
                        scenario::build_scenario_c()}) {
    auto perms = scenario::enumerate_permutations(s);
    all.insert(all.end(), perms.begin(), perms.end());
  }
  return EnvironmentPool(std::move(all));
}

AttackEnv EnvironmentPool::make_env(size_t index) const {
  return AttackEnv(permutations_.at(index), catalog_, layout_);
}

size_t EnvironmentPool::next_index() {
  size_t idx = cursor_;
  cursor_ = (cursor_ + 1) % permutations_.size();
  return idx;
}

AttackEnv EnvironmentPool::next() { return make_env(next_index()); }

size_t EnvironmentPool::worker_index(int worker, int worker_count,
                                     std::uint64_t round) const {
  return (static_cast<std::uint64_t>(worker) +
          round * static_cast<std::uint64_t>(worker_count)) %
         permutations_.size();
}

void TraceWriter::record(int step, int action_index,
                         const ActionCatalog& catalog, double reward,
                         bool done) {
  const Action& a = catalog.at(action_index);
  std::ostringstream row;
  row << step << ',' << action_index << ',' << verb_name(a.verb) << ','
      << (verb_is_targeted(a.verb) ? std::to_string(a.target) : "-") << ','
      << reward << ',' << (done ? 1 : 0);
  rows_.push_back(row.str());
}

std::string TraceWriter::to_csv() const {
  std::string out = "step,action,verb,target,reward,done\n";
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

void TraceWriter::write_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write trace file '" + path + "'");
  f << to_csv();
}

}  // namespace ptrl::simenv
