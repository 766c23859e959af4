#include "ptrl/baseline.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ptrl::baseline {

using simenv::Action;
using simenv::ActionVerb;
using simenv::Fact;

ExecutionChain default_chain() {
  return {Phase::InitialExploit, Phase::ServiceScan, Phase::OsScan,
          Phase::VulnScan,       Phase::Exploit,     Phase::Wiretap,
          Phase::UseCredentials, Phase::CrackHash,   Phase::UseCredentials};
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::InitialExploit: return "initial_exploit";
    case Phase::ServiceScan: return "service_scan";
    case Phase::OsScan: return "os_scan";
    case Phase::VulnScan: return "vuln_scan";
    case Phase::Exploit: return "exploit";
    case Phase::Wiretap: return "wiretap";
    case Phase::UseCredentials: return "use_credentials";
    case Phase::CrackHash: return "crack_hash";
  }
  return "?";
}

ExecutionChain parse_chain(const std::string& text) {
  ExecutionChain chain;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    bool found = false;
    for (Phase p : {Phase::InitialExploit, Phase::ServiceScan, Phase::OsScan,
                    Phase::VulnScan, Phase::Exploit, Phase::Wiretap,
                    Phase::UseCredentials, Phase::CrackHash}) {
      if (word == phase_name(p)) {
        chain.push_back(p);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("unknown chain phase '" + word +
                                  "' at line " + std::to_string(line_no));
    }
  }
  if (chain.empty()) {
    throw std::invalid_argument("execution chain is empty");
  }
  return chain;
}

ExecutionChain load_chain_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read chain file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_chain(buf.str());
}

std::string serialize_chain(const ExecutionChain& chain) {
  std::string out;
  for (Phase p : chain) {
    out += phase_name(p);
    out += '\n';
  }
  return out;
}

namespace {

class ChainRunner {
 public:
  explicit ChainRunner(const scenario::Scenario& s) : env_(s) {}

  BaselineEpisode run(const ExecutionChain& chain) {
    for (Phase phase : chain) {
      if (env_.done()) break;
      apply_phase(phase);
    }
    episode_.solved = env_.solved();
    return episode_;
  }

 private:
  void take(const Action& a) {
    const auto out = env_.step(a);
    episode_.reward += out.reward;
    episode_.actions += 1;
    episode_.action_indices.push_back(env_.catalog().index_of(a));
  }

  // Hosts the chain sweeps over: reachable and discovered, ascending index.
  std::vector<int> sweep_targets() const {
    std::vector<int> out;
    for (int h = 0; h < scenario::kTargetHostCount; ++h) {
      if (env_.knowledge().reachable(h) && env_.knowledge().discovered(h)) {
        out.push_back(h);
      }
    }
    return out;
  }

  bool observed_login_service(int host) const {
    const int ssh = env_.layout().service_index(scenario::kServiceSsh);
    return ssh >= 0 &&
           env_.knowledge().service_state(host, ssh) == Fact::Present;
  }

  void apply_phase(Phase phase) {
    const auto& ks = env_.knowledge();
    switch (phase) {
      case Phase::InitialExploit:
        if (!ks.entry_compromised()) {
          take(Action{ActionVerb::InitialExploit, 0, -1});
        }
        break;

      case Phase::ServiceScan:
      case Phase::OsScan:
      case Phase::VulnScan: {
        const ActionVerb verb = phase == Phase::ServiceScan
                                    ? ActionVerb::ServiceScan
                                    : phase == Phase::OsScan
                                          ? ActionVerb::OsScan
                                          : ActionVerb::VulnScan;
        for (int h : sweep_targets()) {
          if (env_.done()) return;
          take(Action{verb, h, -1});
        }
        break;
      }

      case Phase::Exploit:
        // Fire every exploit whose target service was observed on the host;
        // no blind exploitation.
        for (int h : sweep_targets()) {
          if (env_.knowledge().compromised(h)) continue;
          for (int e = 0; e < env_.catalog().exploit_count(); ++e) {
            if (env_.done()) return;
            const auto* def =
                env_.scenario().find_exploit(env_.catalog().exploit_id(e));
            if (!def) continue;
            const int svc = env_.layout().service_index(def->target_service);
            if (svc < 0 ||
                env_.knowledge().service_state(h, svc) != Fact::Present) {
              continue;
            }
            if (env_.knowledge().compromised(h)) break;
            take(Action{ActionVerb::Exploit, h, e});
          }
        }
        break;

      case Phase::Wiretap:
        // One tap covers the whole subnet.
        if (ks.entry_compromised()) {
          take(Action{ActionVerb::Wiretap, 0, -1});
        }
        break;

      case Phase::UseCredentials:
        if (ks.held_creds().empty()) break;
        for (int h : sweep_targets()) {
          if (env_.done()) return;
          if (env_.knowledge().compromised(h)) continue;
          if (!observed_login_service(h)) continue;
          const std::string mark =
              std::to_string(h) + ":" + env_.knowledge().held_creds().to_string();
          if (!creds_tried_.insert(mark).second) continue;
          take(Action{ActionVerb::UseCredentials, h, -1});
        }
        break;

      case Phase::CrackHash:
        for (int h : sweep_targets()) {
          if (env_.done()) return;
          if (!env_.knowledge().compromised(h)) continue;
          if (!cracked_.insert(h).second) continue;
          take(Action{ActionVerb::CrackHash, h, -1});
        }
        break;
    }
  }

  simenv::AttackEnv env_;
  BaselineEpisode episode_;
  std::set<std::string> creds_tried_;
  std::set<int> cracked_;
};

}  // namespace

BaselineEpisode run_baseline(const scenario::Scenario& s,
                             const ExecutionChain& chain) {
  return ChainRunner(s).run(chain);
}

BaselineResult run_baseline_all(const scenario::Scenario& s,
                                const ExecutionChain& chain) {
  BaselineResult result;
  result.scenario = s.name;
  for (const auto& perm : scenario::enumerate_permutations(s)) {
    result.per_permutation.push_back(run_baseline(perm, chain));
  }
  return result;
}

int BaselineResult::solve_count() const {
  int n = 0;
  for (const auto& e : per_permutation) n += e.solved ? 1 : 0;
  return n;
}

double BaselineResult::solve_fraction() const {
  return per_permutation.empty()
             ? 0.0
             : static_cast<double>(solve_count()) / per_permutation.size();
}

double BaselineResult::avg_reward() const {
  if (per_permutation.empty()) return 0;
  double sum = 0;
  for (const auto& e : per_permutation) sum += e.reward;
  return sum / per_permutation.size();
}

double BaselineResult::avg_actions() const {
  if (per_permutation.empty()) return 0;
  double sum = 0;
  for (const auto& e : per_permutation) sum += static_cast<double>(e.actions);
  return sum / per_permutation.size();
}

}  // namespace ptrl::baseline
