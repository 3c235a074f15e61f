#include "cogsim/rule_sensors.hpp"

#include <algorithm>
#include <limits>

#include "cogsim/error.hpp"
#include "cogsim/pattern.hpp"
#include "json_util.hpp"

namespace cogsim {

using detail::json;

std::vector<std::string> validate_ekm_rule(const EkmRule& rule) {
  std::vector<std::string> out;
  for (const auto& p : rule.biased_patterns) {
    if (std::find(rule.rational_patterns.begin(), rule.rational_patterns.end(), p) !=
        rule.rational_patterns.end()) {
      out.push_back(rule.trigger_id + ": pattern \"" + p + "\" is both biased and rational");
    }
  }
  if (rule.window && !(rule.window->first < rule.window->second)) {
    out.push_back(rule.trigger_id + ": window start must precede end");
  }
  if (rule.host_scope.empty()) out.push_back(rule.trigger_id + ": host_scope empty");
  return out;
}

EkmCounts apply_ekm(const std::vector<EventRecord>& events, const EkmRule& rule) {
  EkmCounts c;
  c.trigger_id = rule.trigger_id;

  auto candidate = [&](const EventRecord& e) {
    return rule.host_scope.count(e.host) > 0 && !any_pattern_matches(rule.exclusions, e.payload);
  };

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (rule.window) {
    std::optional<double> first_contact;
    for (const auto& e : events) {
      if (candidate(e) && (any_pattern_matches(rule.biased_patterns, e.payload) ||
                           any_pattern_matches(rule.rational_patterns, e.payload))) {
        first_contact = e.timestamp;
        break;
      }
    }
    if (!first_contact) return c;
    lo = *first_contact + rule.window->first;
    hi = *first_contact + rule.window->second;
  }

  for (std::size_t i = 0; i < events.size(); ++i) {
    const EventRecord& e = events[i];
    if (!candidate(e) || e.timestamp < lo || e.timestamp > hi) continue;
    if (any_pattern_matches(rule.biased_patterns, e.payload)) {
      c.biased_events.push_back(i);
    } else if (any_pattern_matches(rule.rational_patterns, e.payload)) {
      c.rational_events.push_back(i);
    }
  }
  c.biased_count = static_cast<int>(c.biased_events.size());
  c.rational_count = static_cast<int>(c.rational_events.size());
  return c;
}

EkmRule ekm_b211_rule() {
  EkmRule r;
  r.trigger_id = "B.2.1.1";
  r.host_scope = {"it-ubuntu-1"};
  r.rational_patterns = {"sudo -l", "id", "groups"};
  r.biased_patterns = {"su *-adm*", "ssh *-adm*"};
  return r;
}

EkmRule ekm_l121_rule() {
  EkmRule r;
  r.trigger_id = "L.12.1";
  r.host_scope = {"site-proxy"};
  r.rational_patterns = {"*jndi*"};
  r.biased_patterns = {"ssh *protected-data*", "su *protected-data*"};
  return r;
}

std::vector<EkmRule> load_ekm_rules(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "ekm_rules");
  const json& arr = detail::get_array(root, "rules", "ekm_rules");
  std::vector<EkmRule> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "ekm_rules.rules[" + std::to_string(i) + "]";
    const json& j = arr[i];
    EkmRule r;
    r.trigger_id = detail::get_string(j, "trigger_id", path);
    r.version = static_cast<int>(detail::get_number_or(j, "version", 1, path));
    for (auto& h : detail::get_strings(j, "host_scope", path)) r.host_scope.insert(h);
    if (j.contains("window") && !j["window"].is_null()) {
      const json& w = j["window"];
      if (!w.is_array() || w.size() != 2) detail::config_error(path + ".window", "expected [start, end]");
      r.window = std::pair{detail::get_number(w[0], path + ".window[0]"),
                           detail::get_number(w[1], path + ".window[1]")};
    }
    r.biased_patterns = detail::get_strings(j, "biased_patterns", path);
    r.rational_patterns = detail::get_strings(j, "rational_patterns", path);
    r.exclusions = detail::get_strings_or_empty(j, "exclusions", path);
    if (auto v = validate_ekm_rule(r); !v.empty()) detail::config_error(path, v.front());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EkmRule> load_ekm_rules_file(const std::string& path) {
  return load_ekm_rules(detail::read_file(path));
}

std::string ekm_rules_to_json(const std::vector<EkmRule>& rules) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json j;
    j["trigger_id"] = r.trigger_id;
    j["version"] = r.version;
    j["host_scope"] = std::vector<std::string>(r.host_scope.begin(), r.host_scope.end());
    if (r.window) j["window"] = {r.window->first, r.window->second};
    else j["window"] = nullptr;
    j["biased_patterns"] = r.biased_patterns;
    j["rational_patterns"] = r.rational_patterns;
    j["exclusions"] = r.exclusions;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["rules"] = arr;
  return root.dump(2) + "\n";
}

std::string ekm_counts_csv(const std::vector<CountsRow>& rows) {
  std::string out = "participant,trigger,biased,rational\n";
  for (const auto& r : rows) {
    out += r.participant + ',' + r.counts.trigger_id + ',' + std::to_string(r.counts.biased_count) +
           ',' + std::to_string(r.counts.rational_count) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Surveillance

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

bool pipes_into(std::string_view cmd, const std::vector<std::string>& filters) {
  std::size_t bar = cmd.find('|');
  while (bar != std::string_view::npos) {
    const std::string_view rest = trim(cmd.substr(bar + 1));
    for (const auto& f : filters) {
      if (rest.substr(0, f.size()) == f && (rest.size() == f.size() || rest[f.size()] == ' ')) {
        return true;
      }
    }
    bar = cmd.find('|', bar + 1);
  }
  return false;
}

bool is_verification(std::string_view cmd, const SurveillanceConfig& cfg) {
  if (pipes_into(cmd, cfg.pipe_filters)) return true;
  const std::string_view t = trim(cmd);
  for (const auto& v : cfg.verification_commands) {
    if (t == v || (t.size() > v.size() && t.substr(0, v.size()) == v && t[v.size()] == ' ')) {
      return true;
    }
  }
  return false;
}

}  // namespace

double risk_tolerance_score(const std::vector<EventRecord>& events, double horizon,
                            const SurveillanceConfig& cfg) {
  int commands = 0;
  int aggressive = 0;
  int alerts = 0;
  for (const auto& e : events) {
    if (e.timestamp > horizon) continue;
    if (e.kind == EventKind::Command) {
      ++commands;
      if (any_pattern_matches(cfg.aggressive_patterns, e.payload)) ++aggressive;
    } else if (e.kind == EventKind::Alert) {
      ++alerts;
    }
  }
  const double frac = commands > 0 ? static_cast<double>(aggressive) / commands : 0.0;
  const double alert_term = cfg.alert_cap > 0.0 ? std::min(1.0, alerts / cfg.alert_cap) : 0.0;
  return clamp01(cfg.aggressive_weight * frac + cfg.alert_weight * alert_term);
}

double cognitive_reflection_score(const std::vector<std::string>& commands,
                                  const SurveillanceConfig& cfg) {
  if (commands.empty()) return 0.0;
  int verification = 0;
  int repeats = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (is_verification(commands[i], cfg)) ++verification;
    if (i > 0 && commands[i] == commands[i - 1]) ++repeats;
  }
  const double n = static_cast<double>(commands.size());
  return clamp01(verification / n - repeats / n);
}

}  // namespace cogsim
