#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ptrl/creds.hpp"
#include "ptrl/scenario.hpp"

namespace ptrl::simenv {

// Agent-side knowledge about one fact: not yet scanned, scanned and absent,
// or scanned and present. The distinction between Unknown and Absent is what
// makes scans worth taking.
enum class Fact : std::int8_t { Unknown = -1, Absent = 0, Present = 1 };

// Fixed slot layout of the observation vector. The vocabularies are a
// property of the whole scenario set, not of one scenario, so the encoding
// has the same length everywhere: per host [discovered, reachable,
// compromised, one tri-state per service, per OS label, per vulnerability],
// then nine held-credential indicators, then the entry-compromised flag.
class ObservationLayout {
 public:
  ObservationLayout(std::vector<std::string> services,
                    std::vector<std::string> oses,
                    std::vector<std::string> vulns);

  // Layout covering the bundled scenarios (6 services, 1 OS, 2 vulns).
  static std::shared_ptr<const ObservationLayout> standard();
  static std::shared_ptr<const ObservationLayout> for_scenarios(
      std::span<const scenario::Scenario> scenarios);

  int service_count() const { return static_cast<int>(services_.size()); }
  int os_count() const { return static_cast<int>(oses_.size()); }
  int vuln_count() const { return static_cast<int>(vulns_.size()); }

  int service_index(const std::string& id) const;  // -1 if absent
  int os_index(const std::string& id) const;
  int vuln_index(const std::string& id) const;

  const std::vector<std::string>& services() const { return services_; }
  const std::vector<std::string>& oses() const { return oses_; }
  const std::vector<std::string>& vulns() const { return vulns_; }

  int slots_per_host() const { return 3 + service_count() + os_count() + vuln_count(); }
  int total_slots() const {
    return scenario::kTargetHostCount * slots_per_host() +
           CredentialId::kMax + 1;
  }

  // Slot offsets within one host block.
  int discovered_slot() const { return 0; }
  int reachable_slot() const { return 1; }
  int compromised_slot() const { return 2; }
  int service_slot(int service_index) const { return 3 + service_index; }
  int os_slot(int os_index) const { return 3 + service_count() + os_index; }
  int vuln_slot(int vuln_index) const {
    return 3 + service_count() + os_count() + vuln_index;
  }

 private:
  std::vector<std::string> services_;
  std::vector<std::string> oses_;
  std::vector<std::string> vulns_;
};

// Everything the attacker has learned in the current episode. Facts never
// regress: compromised implies reachable implies discovered, and a resolved
// tri-state stays resolved.
class KnowledgeState {
 public:
  KnowledgeState() = default;
  explicit KnowledgeState(std::shared_ptr<const ObservationLayout> layout);

  bool discovered(int host) const { return flag(host, 0); }
  bool reachable(int host) const { return flag(host, 1); }
  bool compromised(int host) const { return flag(host, 2); }
  Fact service_state(int host, int service_index) const;
  Fact os_state(int host, int os_index) const;
  Fact vuln_state(int host, int vuln_index) const;
  bool services_revealed(int host) const;  // ServiceScan has run on `host`

  bool entry_compromised() const;
  CredentialSet held_creds() const;
  int steps_taken() const { return steps_; }

  // Fixed-length numeric view: tri-states as -1/0/1, booleans as 0/1.
  void encode(std::span<double> out) const;
  std::vector<double> encode() const;

  // Byte-stable fingerprint of the knowledge (step counter excluded); used
  // as the tabular Q-table key and for search memoization.
  std::string canonical_key() const;

  const ObservationLayout& layout() const { return *layout_; }

 private:
  friend class AttackEnv;

  void set_flag(int host, int which);
  bool flag(int host, int which) const;
  std::int8_t& slot(int host, int offset);
  std::int8_t slot(int host, int offset) const;
  void set_cred(int id);
  void set_entry();

  std::shared_ptr<const ObservationLayout> layout_;
  std::vector<std::int8_t> slots_;
  int steps_ = 0;
};

}  // namespace ptrl::simenv
