#include "ptrl/action.hpp"

#include <algorithm>
#include <stdexcept>

namespace ptrl::simenv {

const char* verb_name(ActionVerb verb) {
  switch (verb) {
    case ActionVerb::InitialExploit: return "initial_exploit";
    case ActionVerb::Wiretap: return "wiretap";
    case ActionVerb::ServiceScan: return "service_scan";
    case ActionVerb::OsScan: return "os_scan";
    case ActionVerb::VulnScan: return "vuln_scan";
    case ActionVerb::CrackHash: return "crack_hash";
    case ActionVerb::UseCredentials: return "use_credentials";
    case ActionVerb::Exploit: return "exploit";
  }
  return "?";
}

bool verb_is_targeted(ActionVerb verb) {
  return verb != ActionVerb::InitialExploit && verb != ActionVerb::Wiretap;
}

ActionCatalog::ActionCatalog(std::vector<std::string> exploit_ids)
    : exploit_ids_(std::move(exploit_ids)) {
  actions_.push_back(Action{ActionVerb::InitialExploit, 0, -1});
  actions_.push_back(Action{ActionVerb::Wiretap, 0, -1});
  constexpr ActionVerb generic[] = {
      ActionVerb::ServiceScan, ActionVerb::OsScan, ActionVerb::VulnScan,
      ActionVerb::CrackHash, ActionVerb::UseCredentials};
  for (ActionVerb verb : generic) {
    for (int t = 0; t < scenario::kTargetHostCount; ++t) {
      actions_.push_back(Action{verb, t, -1});
    }
  }
  for (int e = 0; e < static_cast<int>(exploit_ids_.size()); ++e) {
    for (int t = 0; t < scenario::kTargetHostCount; ++t) {
      actions_.push_back(Action{ActionVerb::Exploit, t, e});
    }
  }
}

std::shared_ptr<const ActionCatalog> ActionCatalog::standard() {
  static const auto catalog = std::make_shared<const ActionCatalog>(
      std::vector<std::string>{scenario::kExploitSmtpd,
                               scenario::kExploitSamba,
                               scenario::kExploitVsftpd});
  return catalog;
}

std::shared_ptr<const ActionCatalog> ActionCatalog::for_scenarios(
    std::span<const scenario::Scenario> scenarios) {
  std::vector<std::string> ids;
  for (const auto& s : scenarios) {
    for (const auto& e : s.exploit_defs) {
      if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) {
        ids.push_back(e.id);
      }
    }
  }
  return std::make_shared<const ActionCatalog>(std::move(ids));
}

const Action& ActionCatalog::at(int index) const {
  if (index < 0 || index >= size()) {
    throw std::out_of_range("action index " + std::to_string(index) +
                            " out of range [0, " + std::to_string(size()) +
                            ")");
  }
  return actions_[index];
}

int ActionCatalog::index_of(const Action& a) const {
  for (int i = 0; i < size(); ++i) {
    const Action& b = actions_[i];
    if (b.verb != a.verb) continue;
    if (verb_is_targeted(a.verb) && b.target != a.target) continue;
    if (a.verb == ActionVerb::Exploit && b.exploit_index != a.exploit_index) {
      continue;
    }
    return i;
  }
  return -1;
}

std::string ActionCatalog::describe(int index) const {
  const Action& a = at(index);
  std::string out = verb_name(a.verb);
  if (a.verb == ActionVerb::Exploit) {
    out += "[" + exploit_id(a.exploit_index) + "]";
  }
  if (verb_is_targeted(a.verb)) out += "@" + std::to_string(a.target);
  return out;
}

}  // namespace ptrl::simenv
