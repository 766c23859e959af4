#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptrl/creds.hpp"

namespace ptrl::scenario {

// Services are identified by exact versioned name ("proftpd-1.3.3d"); a
// different version string is a different service.
using ServiceId = std::string;

// An exploit works against exactly one service version (key-and-lock). When
// requires_vuln is set, the targeted host must additionally carry that
// vulnerability flag. There are no fractional success probabilities: an
// exploit either always works or never does.
struct ExploitDef {
  std::string id;
  ServiceId target_service;
  std::optional<std::string> requires_vuln;
  bool success = true;

  bool operator==(const ExploitDef&) const = default;
};

struct HostAddress {
  int subnet = 0;
  int host = 0;

  bool operator==(const HostAddress&) const = default;
};

// Ground-truth description of one host. `compromisable` is derived from the
// scenario as a whole (exploit/credential/crack chain analysis), never set
// by hand.
struct HostSpec {
  HostAddress address;
  std::set<ServiceId> services;
  std::optional<std::string> os;
  std::set<std::string> vulns;
  CredentialSet lootable_creds;   // recovered by cracking hashes after root
  CredentialSet wiretap_creds;    // harvested by wiretapping the subnet
  std::optional<int> access_cred; // holding this credential grants root
  int value = 0;
  bool compromisable = false;

  bool is_empty_host() const {
    return services.empty() && vulns.empty() && lootable_creds.empty() &&
           wiretap_creds.empty() && !access_cred && value == 0;
  }

  bool operator==(const HostSpec&) const = default;
};

inline constexpr int kTargetHostCount = 4;
inline constexpr int kStepLimit = 100;
inline constexpr int kRegularHostValue = 100;
inline constexpr int kEntryHostValue = 50;

// A padded network: exactly four target hosts plus the attacker's entry
// point. The entry host never takes part in permutations.
struct Scenario {
  std::string name;
  std::vector<HostSpec> hosts;  // exactly kTargetHostCount after padding
  HostSpec entry;
  std::vector<ExploitDef> exploit_defs;
  int step_limit = kStepLimit;

  const ExploitDef* find_exploit(const std::string& id) const;

  // Union of every host's wiretap_creds; wiretapping anywhere in the subnet
  // yields the same set.
  CredentialSet wiretap_union() const;

  std::set<ServiceId> service_vocabulary() const;  // hosts + entry
  std::set<std::string> vuln_vocabulary() const;
  std::set<std::string> os_vocabulary() const;

  int compromisable_count() const;
  int total_target_value() const;

  bool operator==(const Scenario&) const = default;
};

// Recomputes every host's derived `compromisable` flag via fixpoint over the
// credential chains: a host falls either to a working exploit or to an
// access credential that is obtainable (wiretap anywhere, or loot cracked
// from an already-compromisable host).
void recompute_compromisable(Scenario& s);

// Validates structural invariants (host count, credential ranges, exploit
// services present in the vocabulary, value levels, step limit). Throws
// std::invalid_argument describing the first violation.
void validate(const Scenario& s);

struct Permutation {
  std::array<int, 4> order{0, 1, 2, 3};

  static Permutation identity() { return Permutation{}; }
  bool is_valid() const;
  Permutation inverse() const;

  // All 4! = 24 permutations in lexicographic order of the tuple.
  static std::vector<Permutation> all();

  bool operator==(const Permutation&) const = default;
};

// Reorders target hosts so that new_hosts[i] = hosts[p.order[i]], then
// reassigns addresses by position (a permutation is "the same network with
// changed addresses"). Entry host and exploit list are untouched.
Scenario permute(const Scenario& s, const Permutation& p);

// One scenario per element of Permutation::all(), in that order.
std::vector<Scenario> enumerate_permutations(const Scenario& s);

// Position-independent fingerprint used to deduplicate permutations that
// produce identical topologies (empty padding hosts are interchangeable).
// Hosts are serialized without addresses and sorted.
std::string canonical_form(const Scenario& s);

// The three bundled scenarios.
Scenario build_scenario_a();
Scenario build_scenario_b();
Scenario build_scenario_c();

// Resolves "a" / "b" / "c" (case-insensitive) to a preset builder; anything
// else returns std::nullopt.
std::optional<Scenario> preset_by_name(const std::string& name);

// Service/vulnerability identifiers shared between the presets.
inline constexpr const char* kServiceSmtpd = "opensmtpd-6.6.0p1";
inline constexpr const char* kServiceProftpd = "proftpd-1.3.3d";
inline constexpr const char* kServiceSamba = "samba-3.0.20";
inline constexpr const char* kServiceVsftpd = "vsftpd-2.3.4";
inline constexpr const char* kServiceSsh = "openssh";
inline constexpr const char* kServiceHttp = "http";
inline constexpr const char* kVulnSmtpd = "CVE-2020-7247";
inline constexpr const char* kVulnSamba = "CVE-2007-2447";
inline constexpr const char* kExploitSmtpd = "smtpd-rce";
inline constexpr const char* kExploitSamba = "samba-usermap";
inline constexpr const char* kExploitVsftpd = "vsftpd-backdoor";

}  // namespace ptrl::scenario
