#include "cogsim/mats_mapper.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/error.hpp"
#include "cogsim/pattern.hpp"
#include "json_util.hpp"

namespace cogsim {

using detail::json;

RuleTable default_rule_table() {
  using namespace technique;
  RuleTable t;
  t.vocabulary = technique::all();
  t.rules = {
      {"R01-nmap", EventKind::Command, "nmap *", kNetworkScan},
      {"R02-passwd", EventKind::Command, "cat /etc/passwd", kAccountDiscovery},
      {"R03-find", EventKind::Command, "find /*", kFileDiscovery},
      {"R04-sudo-l", EventKind::Command, "sudo -l", kPermissionCheck},
      {"R05-ssh", EventKind::Command, "ssh *", kRemoteServices},
      {"R06-hydra", EventKind::Command, "hydra *", kBruteForce},
      {"R07-su-login", EventKind::Command, "su -l *", kValidAccounts},
      {"R08-su-found", EventKind::Command, "su - *", kFoundCredentials},
      {"R09-jndi", EventKind::Command, "*jndi*", kExploitPublicApp},
      {"R10-john", EventKind::Command, "john *", kPasswordCracking},
      {"R11-cp-share", EventKind::Command, "cp /srv/*", kLocalData},
      {"R12-useradd", EventKind::Command, "useradd *", kCreateAccount},
      {"R13-curl-upload", EventKind::Command, "curl -T *", kExfiltration},
  };
  return t;
}

void validate_rule_table(const RuleTable& table) {
  std::set<std::string> vocab(table.vocabulary.begin(), table.vocabulary.end());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < table.rules.size(); ++i) {
    const auto& r = table.rules[i];
    const std::string path = "rules[" + std::to_string(i) + "]";
    if (r.rule_id.empty()) detail::config_error(path + ".rule_id", "empty");
    if (!ids.insert(r.rule_id).second) detail::config_error(path + ".rule_id", "duplicate");
    if (r.payload_pattern.empty()) detail::config_error(path + ".payload_pattern", "empty");
    if (!vocab.count(r.technique_id)) {
      detail::config_error(path + ".technique_id",
                           "\"" + r.technique_id + "\" not in vocabulary");
    }
  }
  if (!(table.success_window > 0.0)) detail::config_error("success_window", "must be positive");
}

RuleTable load_rule_table(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "rules");
  RuleTable t;
  t.vocabulary = detail::get_strings(root, "vocabulary", "rule_table");
  t.success_window = detail::get_number_or(root, "success_window", 1.0, "rule_table");
  const json& rules = detail::get_array(root, "rules", "rule_table");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = "rule_table.rules[" + std::to_string(i) + "]";
    MappingRule r;
    r.rule_id = detail::get_string(rules[i], "rule_id", path);
    const std::string kind = detail::get_string(rules[i], "event_kind", path);
    auto k = event_kind_from_string(kind);
    if (!k) detail::config_error(path + ".event_kind", "unknown kind \"" + kind + "\"");
    r.event_kind = *k;
    r.payload_pattern = detail::get_string(rules[i], "payload_pattern", path);
    r.technique_id = detail::get_string(rules[i], "technique_id", path);
    t.rules.push_back(std::move(r));
  }
  validate_rule_table(t);
  return t;
}

RuleTable load_rule_table_file(const std::string& path) {
  return load_rule_table(detail::read_file(path));
}

std::string rule_table_to_json(const RuleTable& table) {
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const auto& r : table.rules) {
    rules.push_back({{"rule_id", r.rule_id},
                     {"event_kind", std::string(to_string(r.event_kind))},
                     {"payload_pattern", r.payload_pattern},
                     {"technique_id", r.technique_id}});
  }
  nlohmann::ordered_json root{{"vocabulary", table.vocabulary},
                              {"success_window", table.success_window},
                              {"rules", rules}};
  return root.dump(2) + "\n";
}

namespace {

std::optional<HostId> flow_destination(const std::string& payload) {
  const auto arrow = payload.find("->");
  if (arrow == std::string::npos) return std::nullopt;
  const auto colon = payload.find(':', arrow);
  return payload.substr(arrow + 2, colon == std::string::npos ? std::string::npos
                                                              : colon - arrow - 2);
}

}  // namespace

std::vector<TechniqueSignal> map_events(const std::vector<EventRecord>& events,
                                        const RuleTable& table) {
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return events[a].timestamp < events[b].timestamp;
  });

  std::vector<TechniqueSignal> out;
  std::vector<bool> consumed(events.size(), false);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t idx = order[pos];
    if (consumed[idx]) continue;
    const EventRecord& ev = events[idx];

    const MappingRule* hit = nullptr;
    for (const auto& r : table.rules) {
      if (r.event_kind != ev.kind || !pattern_matches(r.payload_pattern, ev.payload)) continue;
      if (hit && hit->technique_id != r.technique_id) {
        throw Error(ErrorCode::AmbiguousMapping, "event " + std::to_string(idx) + " matches " +
                                                     hit->rule_id + " and " + r.rule_id);
      }
      if (!hit) hit = &r;
    }
    if (!hit) continue;

    TechniqueSignal sig;
    sig.technique_id = hit->technique_id;
    sig.timestamp = ev.timestamp;
    sig.source_events.push_back(idx);
    std::optional<HostId> flow_dst;
    std::optional<HostId> session_host;
    if (ev.kind == EventKind::Command) {
      for (std::size_t k = pos + 1; k < order.size(); ++k) {
        const EventRecord& f = events[order[k]];
        if (f.actor != ev.actor) continue;
        if (f.kind == EventKind::Command) break;
        consumed[order[k]] = true;
        sig.source_events.push_back(order[k]);
        if (f.kind == EventKind::Flow && !flow_dst) flow_dst = flow_destination(f.payload);
        if (f.kind == EventKind::Session && f.payload == kSessionOpen && !session_host) {
          session_host = f.host;
        }
      }
    }
    sig.target_host = flow_dst ? *flow_dst : session_host ? *session_host : ev.host;

    if (ev.succeeded) {
      sig.succeeded = *ev.succeeded;
    } else {
      bool opened = false;
      for (std::size_t k = pos + 1; k < order.size(); ++k) {
        const EventRecord& f = events[order[k]];
        if (f.timestamp > ev.timestamp + table.success_window) break;
        if (f.actor == ev.actor && f.kind == EventKind::Session && f.payload == kSessionOpen &&
            f.host == sig.target_host) {
          opened = true;
          break;
        }
      }
      sig.succeeded = opened;
    }
    out.push_back(std::move(sig));
  }
  return out;
}

}  // namespace cogsim
