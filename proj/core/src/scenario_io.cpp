#include "ptrl/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace ptrl::scenario {

std::string ParseError::format(Kind kind, const std::string& message, int line,
                               int column) {
  std::ostringstream os;
  os << (kind == Kind::Syntax ? "syntax error" : "semantic error");
  if (line >= 0) {
    os << " at line " << line;
    if (column >= 0) os << ", column " << column;
  }
  os << ": " << message;
  return os.str();
}

namespace {

[[noreturn]] void semantic(const std::string& msg, const YAML::Node& node) {
  throw ParseError(ParseError::Kind::Semantic, msg, node.Mark().line + 1,
                   node.Mark().column + 1);
}

int parse_cred_id(const YAML::Node& node) {
  int id = node.as<int>();
  if (id < CredentialId::kMin || id > CredentialId::kMax) {
    semantic("credential id must be in 1..9, got " + std::to_string(id), node);
  }
  return id;
}

CredentialSet parse_cred_list(const YAML::Node& node) {
  CredentialSet out;
  if (!node) return out;
  if (!node.IsSequence()) semantic("expected a list of credential ids", node);
  for (const auto& item : node) out.insert(CredentialId(parse_cred_id(item)));
  return out;
}

HostSpec parse_host(const YAML::Node& node) {
  HostSpec h;
  if (node.IsNull()) return h;  // `{}` or `~`: an empty padding host
  if (!node.IsMap()) semantic("host entry must be a map", node);
  static const std::set<std::string> known_keys = {
      "services", "os",            "vulns", "access_cred",
      "lootable_creds", "wiretap_creds", "value"};
  for (const auto& kv : node) {
    std::string key = kv.first.as<std::string>();
    if (!known_keys.contains(key)) {
      semantic("unknown host key '" + key + "'", kv.first);
    }
  }
  if (node["services"]) {
    for (const auto& s : node["services"]) {
      h.services.insert(s.as<std::string>());
    }
  }
  if (node["os"]) h.os = node["os"].as<std::string>();
  if (node["vulns"]) {
    for (const auto& v : node["vulns"]) h.vulns.insert(v.as<std::string>());
  }
  if (node["access_cred"]) h.access_cred = parse_cred_id(node["access_cred"]);
  h.lootable_creds = parse_cred_list(node["lootable_creds"]);
  h.wiretap_creds = parse_cred_list(node["wiretap_creds"]);
  if (node["value"]) h.value = node["value"].as<int>();
  return h;
}

ExploitDef parse_exploit(const YAML::Node& node) {
  if (!node.IsMap()) semantic("exploit entry must be a map", node);
  ExploitDef e;
  if (!node["id"]) semantic("exploit is missing 'id'", node);
  e.id = node["id"].as<std::string>();
  if (!node["target_service"]) {
    semantic("exploit '" + e.id + "' is missing 'target_service'", node);
  }
  e.target_service = node["target_service"].as<std::string>();
  if (node["requires_vuln"]) {
    e.requires_vuln = node["requires_vuln"].as<std::string>();
  }
  if (node["success"]) e.success = node["success"].as<bool>();
  return e;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ParseError(ParseError::Kind::Syntax, ex.msg, ex.mark.line + 1,
                     ex.mark.column + 1);
  }
  if (!root.IsMap()) {
    throw ParseError(ParseError::Kind::Semantic,
                     "scenario document must be a map");
  }

  Scenario s;
  try {
    if (!root["name"]) semantic("scenario is missing 'name'", root);
    s.name = root["name"].as<std::string>();
    if (root["step_limit"]) s.step_limit = root["step_limit"].as<int>();

    const YAML::Node hosts = root["hosts"];
    if (!hosts || !hosts.IsSequence()) {
      semantic("scenario is missing a 'hosts' list", root);
    }
    if (hosts.size() != kTargetHostCount) {
      semantic("expected exactly 4 target hosts (pad shorter scenarios with "
               "empty hosts), got " + std::to_string(hosts.size()),
               hosts);
    }
    int subnet = root["subnet"] ? root["subnet"].as<int>() : 0;
    for (const auto& hn : hosts) s.hosts.push_back(parse_host(hn));
    for (int i = 0; i < kTargetHostCount; ++i) {
      s.hosts[i].address = HostAddress{subnet, i + 1};
    }

    if (!root["entry"]) semantic("scenario is missing 'entry'", root);
    s.entry = parse_host(root["entry"]);
    s.entry.address = HostAddress{subnet, 0};

    if (root["exploits"]) {
      if (!root["exploits"].IsSequence()) {
        semantic("'exploits' must be a list", root["exploits"]);
      }
      for (const auto& en : root["exploits"]) {
        s.exploit_defs.push_back(parse_exploit(en));
      }
    }
  } catch (const YAML::Exception& ex) {
    throw ParseError(ParseError::Kind::Syntax, ex.msg, ex.mark.line + 1,
                     ex.mark.column + 1);
  }

  try {
    recompute_compromisable(s);
    validate(s);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ParseError::Kind::Semantic, ex.what());
  } catch (const std::out_of_range& ex) {
    throw ParseError(ParseError::Kind::Semantic, ex.what());
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(ParseError::Kind::Semantic,
                     "cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ParseError& ex) {
    throw ParseError(ex.kind(), std::string(ex.what()) + " [" + path + "]",
                     ex.line(), ex.column());
  }
}

namespace {

void emit_host(YAML::Emitter& out, const HostSpec& h) {
  if (h.is_empty_host()) {
    out << YAML::Flow << YAML::BeginMap << YAML::EndMap;
    return;
  }
  out << YAML::BeginMap;
  if (!h.services.empty()) {
    out << YAML::Key << "services" << YAML::Value << YAML::Flow
        << YAML::BeginSeq;
    for (const auto& s : h.services) out << s;
    out << YAML::EndSeq;
  }
  if (h.os) out << YAML::Key << "os" << YAML::Value << *h.os;
  if (!h.vulns.empty()) {
    out << YAML::Key << "vulns" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : h.vulns) out << v;
    out << YAML::EndSeq;
  }
  if (h.access_cred) {
    out << YAML::Key << "access_cred" << YAML::Value << *h.access_cred;
  }
  auto emit_creds = [&](const char* key, const CredentialSet& set) {
    if (set.empty()) return;
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (int id : set.values()) out << id;
    out << YAML::EndSeq;
  };
  emit_creds("lootable_creds", h.lootable_creds);
  emit_creds("wiretap_creds", h.wiretap_creds);
  if (h.value != 0) out << YAML::Key << "value" << YAML::Value << h.value;
  out << YAML::EndMap;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "subnet" << YAML::Value << s.entry.address.subnet;
  out << YAML::Key << "step_limit" << YAML::Value << s.step_limit;
  out << YAML::Key << "entry" << YAML::Value;
  emit_host(out, s.entry);
  out << YAML::Key << "hosts" << YAML::Value << YAML::BeginSeq;
  for (const auto& h : s.hosts) emit_host(out, h);
  out << YAML::EndSeq;
  if (!s.exploit_defs.empty()) {
    out << YAML::Key << "exploits" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : s.exploit_defs) {
      out << YAML::BeginMap;
      out << YAML::Key << "id" << YAML::Value << e.id;
      out << YAML::Key << "target_service" << YAML::Value << e.target_service;
      if (e.requires_vuln) {
        out << YAML::Key << "requires_vuln" << YAML::Value << *e.requires_vuln;
      }
      if (!e.success) out << YAML::Key << "success" << YAML::Value << false;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace ptrl::scenario
