#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ptrl/scenario.hpp"

namespace ptrl::simenv {

enum class ActionVerb {
  InitialExploit,  // compromise the entry point; untargeted
  Wiretap,         // harvest subnet credentials; target is irrelevant
  ServiceScan,
  OsScan,
  VulnScan,
  CrackHash,
  UseCredentials,
  Exploit,
};

const char* verb_name(ActionVerb verb);
bool verb_is_targeted(ActionVerb verb);

// One concrete action. `target` is a host position (0..3) and is ignored by
// the untargeted verbs. `exploit_index` indexes the catalog's exploit
// vocabulary and is only meaningful for Exploit.
struct Action {
  ActionVerb verb = ActionVerb::InitialExploit;
  int target = 0;
  int exploit_index = -1;

  bool operator==(const Action&) const = default;
};

// The fixed, enumerable action vocabulary shared by every environment. The
// canonical index order is: InitialExploit, Wiretap, then each targeted verb
// (ServiceScan, OsScan, VulnScan, CrackHash, UseCredentials, one Exploit verb
// per registered exploit id) over targets 0..3.
class ActionCatalog {
 public:
  explicit ActionCatalog(std::vector<std::string> exploit_ids);

  // Catalog over the union of the bundled scenarios' exploits.
  static std::shared_ptr<const ActionCatalog> standard();

  // Catalog over the union of the given scenarios' exploits, ids in
  // first-seen order.
  static std::shared_ptr<const ActionCatalog> for_scenarios(
      std::span<const scenario::Scenario> scenarios);

  int size() const { return static_cast<int>(actions_.size()); }
  const Action& at(int index) const;
  int index_of(const Action& a) const;  // canonical index; -1 if not listed

  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<std::string>& exploit_ids() const { return exploit_ids_; }
  const std::string& exploit_id(int exploit_index) const {
    return exploit_ids_.at(exploit_index);
  }
  int exploit_count() const { return static_cast<int>(exploit_ids_.size()); }

  std::string describe(int index) const;  // e.g. "exploit[samba-usermap]@2"

 private:
  std::vector<std::string> exploit_ids_;
  std::vector<Action> actions_;
};

}  // namespace ptrl::simenv
