#include "cogsim/range_model.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "cogsim/error.hpp"
#include "json_util.hpp"

namespace cogsim {

using detail::json;

std::string_view to_string(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Account: return "account";
    case ArtifactKind::File: return "file";
    case ArtifactKind::Alias: return "alias";
    case ArtifactKind::ProxyNote: return "proxy_note";
    case ArtifactKind::Service: return "service";
  }
  return "?";
}

std::optional<ArtifactKind> artifact_kind_from_string(std::string_view s) {
  for (auto k : {ArtifactKind::Account, ArtifactKind::File, ArtifactKind::Alias,
                 ArtifactKind::ProxyNote, ArtifactKind::Service}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

const HostNode* Scenario::find_host(std::string_view id) const {
  for (const auto& h : hosts) {
    if (h.host_id == id) return &h;
  }
  return nullptr;
}

bool Scenario::has_edge(std::string_view a, std::string_view b) const {
  for (const auto& [x, y] : edges) {
    if ((x == a && y == b) || (x == b && y == a)) return true;
  }
  return false;
}

std::vector<HostId> Scenario::neighbors(std::string_view id) const {
  std::vector<HostId> out;
  for (const auto& [x, y] : edges) {
    if (x == id) out.push_back(y);
    else if (y == id) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Scenario::on_attack_path(std::string_view id) const {
  return std::find(attack_path.begin(), attack_path.end(), id) != attack_path.end();
}

std::vector<Artifact> Scenario::visible_artifacts(std::string_view id) const {
  std::vector<Artifact> out;
  if (const HostNode* h = find_host(id)) out = h->artifacts;
  for (const auto& t : triggers) {
    if (t.host_id == id) out.insert(out.end(), t.artifacts.begin(), t.artifacts.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trigger id grammar

namespace {

std::optional<int> parse_segment(std::string_view seg) {
  if (seg.empty() || seg.size() > 9) return std::nullopt;
  if (seg.size() > 1 && seg.front() == '0') return std::nullopt;
  if (seg.find_first_not_of("0123456789") != std::string_view::npos) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), value);
  if (ec != std::errc{} || ptr != seg.data() + seg.size()) return std::nullopt;
  return value;
}

}  // namespace

TriggerId parse_trigger_id(std::string_view code) {
  const std::string quoted = "\"" + std::string(code) + "\"";
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = code.find('.', start);
    parts.push_back(code.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (parts.size() < 2 || parts[0].size() != 1) {
    throw Error(ErrorCode::MalformedTriggerId, quoted + " is not <letter>.<int>(.<int>)*");
  }
  auto bias = bias_from_letter(parts[0][0]);
  if (!bias) throw Error(ErrorCode::UnknownBiasCode, quoted + " has unknown bias letter");

  TriggerId id{*bias, 0, {}};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto v = parse_segment(parts[i]);
    if (!v) {
      throw Error(ErrorCode::MalformedTriggerId,
                  quoted + " has malformed numeric segment " + std::to_string(i));
    }
    if (i == 1) id.class_code = *v;
    else id.instance.push_back(*v);
  }
  return id;
}

std::string render_trigger_id(const TriggerId& id) {
  std::string out(1, bias_letter(id.bias));
  out += '.' + std::to_string(id.class_code);
  for (int v : id.instance) out += '.' + std::to_string(v);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool is_dotted_quad(std::string_view ip) {
  int octets = 0;
  std::size_t start = 0;
  while (start <= ip.size()) {
    const std::size_t dot = ip.find('.', start);
    const std::string_view seg =
        ip.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (seg.empty() || seg.size() > 3) return false;
    int v = 0;
    auto [ptr, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), v);
    if (ec != std::errc{} || ptr != seg.data() + seg.size() || v > 255) return false;
    ++octets;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return octets == 4;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;

  std::set<std::string> ids;
  std::map<int, int> rank_uses;
  for (const auto& h : s.hosts) {
    if (h.host_id.empty()) out.push_back("host_id empty");
    if (!ids.insert(h.host_id).second) out.push_back("host_id " + h.host_id + " duplicated");
    if (!is_dotted_quad(h.ip)) {
      out.push_back("ip of " + h.host_id + " is not a dotted quad: " + h.ip);
    }
    if (h.path_rank) {
      if (*h.path_rank < 1 || *h.path_rank > kMaxPathRank) {
        out.push_back("path_rank " + std::to_string(*h.path_rank) + " of " + h.host_id +
                      " outside 1..12");
      }
      ++rank_uses[*h.path_rank];
    }
    if (!(h.alert_sensitivity >= 0.0 && h.alert_sensitivity <= 1.0)) {
      out.push_back("alert_sensitivity of " + h.host_id + " outside [0,1]");
    }
    if (!(h.value >= 0.0)) out.push_back("value of " + h.host_id + " negative");
    for (const auto& a : h.artifacts) {
      if (a.name.empty()) out.push_back("artifact name empty on " + h.host_id);
    }
  }
  for (const auto& [rank, n] : rank_uses) {
    if (n > 1) out.push_back("path_rank " + std::to_string(rank) + " duplicated");
  }

  for (const auto& [a, b] : s.edges) {
    if (!ids.count(a)) out.push_back("edge references unknown host " + a);
    if (!ids.count(b)) out.push_back("edge references unknown host " + b);
  }

  if (s.attack_path.empty()) out.push_back("attack_path empty");
  std::set<std::string> on_path;
  for (std::size_t i = 0; i < s.attack_path.size(); ++i) {
    const auto& id = s.attack_path[i];
    if (!ids.count(id)) out.push_back("attack_path references unknown host " + id);
    if (!on_path.insert(id).second) out.push_back("attack_path repeats host " + id);
    if (i > 0 && !s.has_edge(s.attack_path[i - 1], id)) {
      out.push_back("attack_path not connected at index " + std::to_string(i));
    }
  }
  if (!s.attack_path.empty() && s.entry_host != s.attack_path.front()) {
    out.push_back("entry_host " + s.entry_host + " is not attack_path[0]");
  }
  if (!ids.count(s.entry_host)) out.push_back("entry_host references unknown host " + s.entry_host);

  std::set<std::string> trigger_ids;
  for (const auto& t : s.triggers) {
    const std::string tag = "trigger " + t.trigger_id;
    if (!trigger_ids.insert(t.trigger_id).second) out.push_back(tag + " duplicated");
    try {
      const TriggerId parsed = parse_trigger_id(t.trigger_id);
      if (parsed.class_code != t.class_code) {
        out.push_back(tag + " class_code " + std::to_string(t.class_code) +
                      " disagrees with id");
      }
      if (std::find(t.bias_targets.begin(), t.bias_targets.end(), parsed.bias) ==
          t.bias_targets.end()) {
        out.push_back(tag + " bias_targets missing the bias named by its id letter");
      }
    } catch (const Error& e) {
      out.push_back(tag + " id invalid: " + e.what());
    }
    if (t.bias_targets.empty() || t.bias_targets.size() > 2) {
      out.push_back(tag + " bias_targets must hold 1 or 2 entries");
    }
    if (!ids.count(t.host_id)) out.push_back(tag + " references unknown host " + t.host_id);
    for (const auto& p : t.biased_signatures) {
      if (std::find(t.rational_signatures.begin(), t.rational_signatures.end(), p) !=
          t.rational_signatures.end()) {
        out.push_back(tag + " signature \"" + p + "\" is both biased and rational");
      }
    }
    if (t.interaction_time_cost < 0.0) out.push_back(tag + " interaction_time_cost negative");
    for (const auto& a : t.artifacts) {
      if (a.name.empty()) out.push_back(tag + " artifact name empty");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Artifact artifact_from_json(const json& j, const std::string& path) {
  Artifact a;
  const std::string kind = detail::get_string(j, "kind", path);
  auto k = artifact_kind_from_string(kind);
  if (!k) detail::config_error(path + ".kind", "unknown artifact kind \"" + kind + "\"");
  a.kind = *k;
  a.name = detail::get_string(j, "name", path);
  a.grants_privilege = detail::get_bool(j, "grants_privilege", path);
  a.salience_tags = detail::get_strings_or_empty(j, "salience_tags", path);
  return a;
}

json artifact_to_json(const Artifact& a) {
  return json{{"kind", std::string(to_string(a.kind))},
              {"name", a.name},
              {"grants_privilege", a.grants_privilege},
              {"salience_tags", a.salience_tags}};
}

std::vector<Artifact> artifacts_from_json(const json& obj, const std::string& path) {
  std::vector<Artifact> out;
  if (!obj.contains("artifacts")) return out;
  const json& arr = detail::get_array(obj, "artifacts", path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(artifact_from_json(arr[i], path + ".artifacts[" + std::to_string(i) + "]"));
  }
  return out;
}

json artifacts_to_json(const std::vector<Artifact>& as) {
  json arr = json::array();
  for (const auto& a : as) arr.push_back(artifact_to_json(a));
  return arr;
}

HostNode host_from_json(const json& j, const std::string& path) {
  HostNode h;
  h.host_id = detail::get_string(j, "host_id", path);
  h.display_name = detail::get_string(j, "display_name", path);
  h.ip = detail::get_string(j, "ip", path);
  h.subnet = detail::get_string(j, "subnet", path);
  if (auto it = j.find("path_rank"); it != j.end() && !it->is_null()) {
    h.path_rank = static_cast<int>(detail::get_int(*it, path + ".path_rank"));
  }
  h.artifacts = artifacts_from_json(j, path);
  h.alert_sensitivity = detail::get_number_or(j, "alert_sensitivity", 1.0, path);
  h.value = detail::get_number_or(j, "value", 1.0, path);
  return h;
}

TriggerSpec trigger_from_json(const json& j, const std::string& path) {
  TriggerSpec t;
  t.trigger_id = detail::get_string(j, "trigger_id", path);
  for (const auto& name : detail::get_strings(j, "bias_targets", path)) {
    auto b = bias_from_string(name);
    if (!b) detail::config_error(path + ".bias_targets", "unknown bias \"" + name + "\"");
    t.bias_targets.push_back(*b);
  }
  t.host_id = detail::get_string(j, "host_id", path);
  t.class_code = static_cast<int>(detail::get_int(j, "class_code", path));
  t.biased_signatures = detail::get_strings(j, "biased_signatures", path);
  t.rational_signatures = detail::get_strings(j, "rational_signatures", path);
  t.interaction_time_cost = detail::get_number(j, "interaction_time_cost", path);
  t.artifacts = artifacts_from_json(j, path);
  return t;
}

json trigger_to_json(const TriggerSpec& t) {
  json biases = json::array();
  for (BiasKind b : t.bias_targets) biases.push_back(std::string(to_string(b)));
  return json{{"trigger_id", t.trigger_id},
              {"bias_targets", biases},
              {"host_id", t.host_id},
              {"class_code", t.class_code},
              {"biased_signatures", t.biased_signatures},
              {"rational_signatures", t.rational_signatures},
              {"interaction_time_cost", t.interaction_time_cost},
              {"artifacts", artifacts_to_json(t.artifacts)}};
}

}  // namespace

Scenario load_scenario(std::string_view config_text) {
  const json root = detail::parse_json(config_text, "scenario");
  if (!root.is_object()) detail::config_error("scenario", "expected object");
  Scenario s;

  const json& hosts = detail::get_array(root, "hosts", "scenario");
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    s.hosts.push_back(host_from_json(hosts[i], "scenario.hosts[" + std::to_string(i) + "]"));
  }
  const json& edges = detail::get_array(root, "edges", "scenario");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = "scenario.edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      detail::config_error(p, "expected [host_id, host_id]");
    }
    s.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  s.attack_path = detail::get_strings(root, "attack_path", "scenario");
  const json& triggers = detail::get_array(root, "triggers", "scenario");
  for (std::size_t i = 0; i < triggers.size(); ++i) {
    s.triggers.push_back(
        trigger_from_json(triggers[i], "scenario.triggers[" + std::to_string(i) + "]"));
  }
  s.entry_host = detail::get_string(root, "entry_host", "scenario");
  const json& seed = detail::require(root, "seed", "scenario");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    detail::config_error("scenario.seed", "expected unsigned integer");
  }
  s.seed = seed.get<std::uint64_t>();

  auto violations = validate_scenario(s);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(ErrorCode::ScenarioInvalid, msg);
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  return load_scenario(detail::read_file(path));
}

std::string scenario_to_json(const Scenario& s) {
  json hosts = json::array();
  for (const auto& h : s.hosts) {
    json j{{"host_id", h.host_id},     {"display_name", h.display_name},
           {"ip", h.ip},               {"subnet", h.subnet},
           {"artifacts", artifacts_to_json(h.artifacts)},
           {"alert_sensitivity", h.alert_sensitivity},
           {"value", h.value}};
    if (h.path_rank) j["path_rank"] = *h.path_rank;
    hosts.push_back(std::move(j));
  }
  json edges = json::array();
  for (const auto& [a, b] : s.edges) edges.push_back(json::array({a, b}));
  json triggers = json::array();
  for (const auto& t : s.triggers) triggers.push_back(trigger_to_json(t));
  json root{{"hosts", hosts},       {"edges", edges},           {"attack_path", s.attack_path},
            {"triggers", triggers}, {"entry_host", s.entry_host}, {"seed", s.seed}};
  return root.dump(2) + "\n";
}

Scenario with_trigger(const Scenario& s, const TriggerSpec& trigger) {
  Scenario out = s;
  std::erase_if(out.triggers, [&](const TriggerSpec& t) { return t.trigger_id == trigger.trigger_id; });
  out.triggers.push_back(trigger);
  return out;
}

Scenario without_triggers(const Scenario& s) {
  Scenario out = s;
  out.triggers.clear();
  return out;
}

}  // namespace cogsim

namespace cogsim {

std::vector<TriggerSpec> load_triggers(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "candidates");
  const json& arr = detail::get_array(root, "candidates", "candidates");
  std::vector<TriggerSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(trigger_from_json(arr[i], "candidates[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string triggers_to_json(const std::vector<TriggerSpec>& triggers) {
  json arr = json::array();
  for (const auto& t : triggers) arr.push_back(trigger_to_json(t));
  return json{{"candidates", arr}}.dump(2) + "\n";
}

}  // namespace cogsim
