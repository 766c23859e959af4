#include "ptrl/scenario.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ptrl::scenario {

const ExploitDef* Scenario::find_exploit(const std::string& id) const {
  for (const auto& e : exploit_defs) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

CredentialSet Scenario::wiretap_union() const {
  CredentialSet all;
  for (const auto& h : hosts) all.merge(h.wiretap_creds);
  return all;
}

std::set<ServiceId> Scenario::service_vocabulary() const {
  std::set<ServiceId> vocab(entry.services.begin(), entry.services.end());
  for (const auto& h : hosts) vocab.insert(h.services.begin(), h.services.end());
  return vocab;
}

std::set<std::string> Scenario::vuln_vocabulary() const {
  std::set<std::string> vocab(entry.vulns.begin(), entry.vulns.end());
  for (const auto& h : hosts) vocab.insert(h.vulns.begin(), h.vulns.end());
  return vocab;
}

std::set<std::string> Scenario::os_vocabulary() const {
  std::set<std::string> vocab;
  if (entry.os) vocab.insert(*entry.os);
  for (const auto& h : hosts) {
    if (h.os) vocab.insert(*h.os);
  }
  return vocab;
}

int Scenario::compromisable_count() const {
  int n = 0;
  for (const auto& h : hosts) n += h.compromisable ? 1 : 0;
  return n;
}

int Scenario::total_target_value() const {
  int v = 0;
  for (const auto& h : hosts) v += h.value;
  return v;
}

namespace {

bool exploitable(const Scenario& s, const HostSpec& h) {
  for (const auto& e : s.exploit_defs) {
    if (!e.success) continue;
    if (!h.services.contains(e.target_service)) continue;
    if (e.requires_vuln && !h.vulns.contains(*e.requires_vuln)) continue;
    return true;
  }
  return false;
}

}  // namespace

void recompute_compromisable(Scenario& s) {
  CredentialSet obtainable = s.wiretap_union();
  for (auto& h : s.hosts) h.compromisable = false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& h : s.hosts) {
      if (h.compromisable) continue;
      bool falls = exploitable(s, h);
      if (!falls && h.access_cred) {
        falls = obtainable.contains(CredentialId(*h.access_cred));
      }
      if (falls) {
        h.compromisable = true;
        obtainable.merge(h.lootable_creds);
        changed = true;
      }
    }
  }
}

void validate(const Scenario& s) {
  if (s.hosts.size() != kTargetHostCount) {
    throw std::invalid_argument(
        "scenario '" + s.name + "' must have exactly 4 target hosts (pad "
        "with empty hosts), got " + std::to_string(s.hosts.size()));
  }
  if (s.step_limit != kStepLimit) {
    throw std::invalid_argument("step_limit must be 100, got " +
                                std::to_string(s.step_limit));
  }
  auto check_host = [&](const HostSpec& h, const std::string& which) {
    if (h.access_cred) CredentialId(*h.access_cred);  // range check
    if (h.value != 0 && h.value != kEntryHostValue &&
        h.value != kRegularHostValue) {
      throw std::invalid_argument(which + ": host value must be one of "
                                  "{0, 50, 100}, got " +
                                  std::to_string(h.value));
    }
  };
  check_host(s.entry, "entry");
  for (size_t i = 0; i < s.hosts.size(); ++i) {
    check_host(s.hosts[i], "host " + std::to_string(i));
  }
  auto vocab = s.service_vocabulary();
  std::set<std::string> seen_ids;
  for (const auto& e : s.exploit_defs) {
    if (!seen_ids.insert(e.id).second) {
      throw std::invalid_argument("duplicate exploit id '" + e.id + "'");
    }
    if (!vocab.contains(e.target_service)) {
      throw std::invalid_argument("exploit '" + e.id +
                                  "' targets unknown service '" +
                                  e.target_service + "'");
    }
    if (e.requires_vuln && e.requires_vuln->empty()) {
      throw std::invalid_argument("exploit '" + e.id +
                                  "' has an empty requires_vuln");
    }
  }
}

bool Permutation::is_valid() const {
  std::array<bool, 4> seen{};
  for (int i : order) {
    if (i < 0 || i >= 4 || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  for (int i = 0; i < 4; ++i) inv.order[order[i]] = i;
  return inv;
}

std::vector<Permutation> Permutation::all() {
  std::vector<Permutation> out;
  Permutation p = identity();
  do {
    out.push_back(p);
  } while (std::next_permutation(p.order.begin(), p.order.end()));
  return out;
}

Scenario permute(const Scenario& s, const Permutation& p) {
  if (!p.is_valid()) {
    throw std::invalid_argument("permutation is not a bijection on {0,1,2,3}");
  }
  if (s.hosts.size() != kTargetHostCount) {
    throw std::invalid_argument("scenario must be padded to 4 target hosts");
  }
  Scenario out = s;
  for (int i = 0; i < kTargetHostCount; ++i) {
    out.hosts[i] = s.hosts[p.order[i]];
    out.hosts[i].address = HostAddress{s.entry.address.subnet, i + 1};
  }
  return out;
}

std::vector<Scenario> enumerate_permutations(const Scenario& s) {
  std::vector<Scenario> out;
  for (const auto& p : Permutation::all()) out.push_back(permute(s, p));
  return out;
}

namespace {

std::string host_fingerprint(const HostSpec& h) {
  std::ostringstream os;
  os << "svc=";
  for (const auto& s : h.services) os << s << ',';
  os << ";os=" << (h.os ? *h.os : "") << ";vulns=";
  for (const auto& v : h.vulns) os << v << ',';
  os << ";loot=" << h.lootable_creds.to_string()
     << ";wire=" << h.wiretap_creds.to_string()
     << ";access=" << (h.access_cred ? std::to_string(*h.access_cred) : "")
     << ";value=" << h.value;
  return os.str();
}

}  // namespace

std::string canonical_form(const Scenario& s) {
  // Position-wise host fingerprints with addresses ignored: permutations
  // that merely swap identical (empty) hosts map to the same form, so the
  // count of distinct forms over all 24 permutations is the number of truly
  // different environments.
  std::string out = s.name + "|" + host_fingerprint(s.entry);
  for (const auto& h : s.hosts) out += "|" + host_fingerprint(h);
  return out;
}

namespace {

HostSpec make_entry(int subnet) {
  HostSpec entry;
  entry.address = HostAddress{subnet, 0};
  entry.services = {kServiceSsh};
  entry.os = "linux";
  entry.value = kEntryHostValue;
  return entry;
}

HostSpec empty_host(int subnet, int index) {
  HostSpec h;
  h.address = HostAddress{subnet, index};
  return h;
}

ExploitDef smtpd_exploit() {
  return ExploitDef{kExploitSmtpd, kServiceSmtpd, kVulnSmtpd, true};
}
ExploitDef samba_exploit() {
  return ExploitDef{kExploitSamba, kServiceSamba, kVulnSamba, true};
}
ExploitDef vsftpd_exploit() {
  // The vsftpd 2.3.4 backdoor is not tracked under a CVE; no vulnerability
  // flag is required.
  return ExploitDef{kExploitVsftpd, kServiceVsftpd, std::nullopt, true};
}

}  // namespace

Scenario build_scenario_a() {
  constexpr int subnet = 0;
  Scenario s;
  s.name = "A";
  s.entry = make_entry(subnet);
  s.exploit_defs = {smtpd_exploit(), samba_exploit(), vsftpd_exploit()};

  HostSpec n1;
  n1.services = {kServiceSmtpd, kServiceSsh};
  n1.os = "linux";
  n1.vulns = {kVulnSmtpd};
  n1.value = kRegularHostValue;

  HostSpec n2;  // no exploit exists for this proftpd version
  n2.services = {kServiceProftpd, kServiceSsh};
  n2.os = "linux";
  n2.value = 0;

  HostSpec n3;
  n3.services = {kServiceSamba, kServiceSsh};
  n3.os = "linux";
  n3.vulns = {kVulnSamba};
  n3.value = kRegularHostValue;

  HostSpec n4;  // backdoored vsftpd, exploitable without a CVE flag
  n4.services = {kServiceVsftpd, kServiceSsh};
  n4.os = "linux";
  n4.value = kRegularHostValue;

  s.hosts = {n1, n2, n3, n4};
  for (int i = 0; i < kTargetHostCount; ++i) {
    s.hosts[i].address = HostAddress{subnet, i + 1};
  }
  recompute_compromisable(s);
  validate(s);
  return s;
}

Scenario build_scenario_b() {
  constexpr int subnet = 1;
  Scenario s;
  s.name = "B";
  s.entry = make_entry(subnet);

  // Credentials travel in clear text over this subnet every few seconds, so
  // a wiretap anywhere recovers credential 1, which opens host 1.
  HostSpec n11;
  n11.services = {kServiceSsh};
  n11.os = "linux";
  n11.access_cred = 1;
  n11.wiretap_creds = CredentialSet::from_string("1");
  n11.value = kRegularHostValue;

  HostSpec n12;  // plain web server, nothing to compromise
  n12.services = {kServiceHttp};
  n12.os = "linux";
  n12.wiretap_creds = CredentialSet::from_string("1");
  n12.value = 0;

  s.hosts = {n11, n12, empty_host(subnet, 3), empty_host(subnet, 4)};
  for (int i = 0; i < kTargetHostCount; ++i) {
    s.hosts[i].address = HostAddress{subnet, i + 1};
  }
  recompute_compromisable(s);
  validate(s);
  return s;
}

Scenario build_scenario_c() {
  constexpr int subnet = 2;
  Scenario s;
  s.name = "C";
  s.entry = make_entry(subnet);
  // Same vulnerable samba service (and exploit) as scenario A's host 3.
  s.exploit_defs = {samba_exploit()};

  // Rooting the samba host exposes a weakly hashed password (credential 2)
  // that can be cracked and reused against the second host.
  HostSpec n21;
  n21.services = {kServiceSamba, kServiceSsh};
  n21.os = "linux";
  n21.vulns = {kVulnSamba};
  n21.lootable_creds = CredentialSet::from_string("2");
  n21.value = kRegularHostValue;

  HostSpec n22;
  n22.services = {kServiceSsh};
  n22.os = "linux";
  n22.access_cred = 2;
  n22.value = kRegularHostValue;

  s.hosts = {n21, n22, empty_host(subnet, 3), empty_host(subnet, 4)};
  for (int i = 0; i < kTargetHostCount; ++i) {
    s.hosts[i].address = HostAddress{subnet, i + 1};
  }
  recompute_compromisable(s);
  validate(s);
  return s;
}

std::optional<Scenario> preset_by_name(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "a") return build_scenario_a();
  if (lower == "b") return build_scenario_b();
  if (lower == "c") return build_scenario_c();
  return std::nullopt;
}

}  // namespace ptrl::scenario
