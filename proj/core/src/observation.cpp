#include "ptrl/observation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ptrl::simenv {

ObservationLayout::ObservationLayout(std::vector<std::string> services,
                                     std::vector<std::string> oses,
                                     std::vector<std::string> vulns)
    : services_(std::move(services)),
      oses_(std::move(oses)),
      vulns_(std::move(vulns)) {
  std::sort(services_.begin(), services_.end());
  std::sort(oses_.begin(), oses_.end());
  std::sort(vulns_.begin(), vulns_.end());
}

std::shared_ptr<const ObservationLayout> ObservationLayout::standard() {
  static const auto layout = [] {
    const scenario::Scenario presets[] = {scenario::build_scenario_a(),
                                          scenario::build_scenario_b(),
                                          scenario::build_scenario_c()};
    return for_scenarios(presets);
  }();
  return layout;
}

std::shared_ptr<const ObservationLayout> ObservationLayout::for_scenarios(
    std::span<const scenario::Scenario> scenarios) {
  std::set<std::string> services, oses, vulns;
  for (const auto& s : scenarios) {
    auto sv = s.service_vocabulary();
    services.insert(sv.begin(), sv.end());
    auto ov = s.os_vocabulary();
    oses.insert(ov.begin(), ov.end());
    auto vv = s.vuln_vocabulary();
    vulns.insert(vv.begin(), vv.end());
  }
  return std::make_shared<const ObservationLayout>(
      std::vector<std::string>(services.begin(), services.end()),
      std::vector<std::string>(oses.begin(), oses.end()),
      std::vector<std::string>(vulns.begin(), vulns.end()));
}

namespace {
int index_in(const std::vector<std::string>& v, const std::string& id) {
  auto it = std::find(v.begin(), v.end(), id);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}
}  // namespace

int ObservationLayout::service_index(const std::string& id) const {
  return index_in(services_, id);
}
int ObservationLayout::os_index(const std::string& id) const {
  return index_in(oses_, id);
}
int ObservationLayout::vuln_index(const std::string& id) const {
  return index_in(vulns_, id);
}

KnowledgeState::KnowledgeState(
    std::shared_ptr<const ObservationLayout> layout)
    : layout_(std::move(layout)) {
  slots_.assign(layout_->total_slots(), 0);
  for (int h = 0; h < scenario::kTargetHostCount; ++h) {
    for (int s = 0; s < layout_->service_count(); ++s) {
      slot(h, layout_->service_slot(s)) = static_cast<std::int8_t>(-1);
    }
    for (int o = 0; o < layout_->os_count(); ++o) {
      slot(h, layout_->os_slot(o)) = static_cast<std::int8_t>(-1);
    }
    for (int v = 0; v < layout_->vuln_count(); ++v) {
      slot(h, layout_->vuln_slot(v)) = static_cast<std::int8_t>(-1);
    }
  }
}

std::int8_t& KnowledgeState::slot(int host, int offset) {
  return slots_[host * layout_->slots_per_host() + offset];
}
std::int8_t KnowledgeState::slot(int host, int offset) const {
  return slots_[host * layout_->slots_per_host() + offset];
}

void KnowledgeState::set_flag(int host, int which) {
  slot(host, which) = 1;
}
bool KnowledgeState::flag(int host, int which) const {
  return slot(host, which) == 1;
}

Fact KnowledgeState::service_state(int host, int service_index) const {
  return static_cast<Fact>(slot(host, layout_->service_slot(service_index)));
}
Fact KnowledgeState::os_state(int host, int os_index) const {
  return static_cast<Fact>(slot(host, layout_->os_slot(os_index)));
}
Fact KnowledgeState::vuln_state(int host, int vuln_index) const {
  return static_cast<Fact>(slot(host, layout_->vuln_slot(vuln_index)));
}

bool KnowledgeState::services_revealed(int host) const {
  for (int s = 0; s < layout_->service_count(); ++s) {
    if (service_state(host, s) == Fact::Unknown) return false;
  }
  return layout_->service_count() > 0;
}

bool KnowledgeState::entry_compromised() const {
  return slots_.back() == 1;
}

CredentialSet KnowledgeState::held_creds() const {
  CredentialSet out;
  int base = scenario::kTargetHostCount * layout_->slots_per_host();
  for (int id = CredentialId::kMin; id <= CredentialId::kMax; ++id) {
    if (slots_[base + id - 1] == 1) out.insert(CredentialId(id));
  }
  return out;
}

void KnowledgeState::set_cred(int id) {
  int base = scenario::kTargetHostCount * layout_->slots_per_host();
  slots_[base + id - 1] = 1;
}

void KnowledgeState::set_entry() { slots_.back() = 1; }

void KnowledgeState::encode(std::span<double> out) const {
  if (out.size() != slots_.size()) {
    throw std::invalid_argument("observation buffer has wrong length");
  }
  for (size_t i = 0; i < slots_.size(); ++i) {
    out[i] = static_cast<double>(slots_[i]);
  }
}

std::vector<double> KnowledgeState::encode() const {
  std::vector<double> out(slots_.size());
  encode(out);
  return out;
}

std::string KnowledgeState::canonical_key() const {
  std::string key(slots_.size(), '0');
  for (size_t i = 0; i < slots_.size(); ++i) {
    key[i] = slots_[i] < 0 ? 'u' : static_cast<char>('0' + slots_[i]);
  }
  return key;
}

}  // namespace ptrl::simenv
