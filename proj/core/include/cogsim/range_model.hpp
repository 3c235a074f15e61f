#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogsim/bias.hpp"

namespace cogsim {

using HostId = std::string;

enum class ArtifactKind { Account, File, Alias, ProxyNote, Service };

std::string_view to_string(ArtifactKind k);
std::optional<ArtifactKind> artifact_kind_from_string(std::string_view s);

// Something an attacker can find on a host. Decoys carry grants_privilege=false
// and may still have admin-like names.
//
// Salience tags drive which actions the artifact offers:
//   "password-protected"       file can be cracked
//   "credential:<account>"     note advertises credentials for <account>
//   "exploit:<service>"        note advertises an exploit route against <service>
//   "aliased:<command>"        alias makes <command> close the session on this host
struct Artifact {
  ArtifactKind kind = ArtifactKind::File;
  std::string name;
  bool grants_privilege = true;
  std::vector<std::string> salience_tags;

  bool operator==(const Artifact&) const = default;
};

struct HostNode {
  HostId host_id;
  std::string display_name;
  std::string ip;
  std::string subnet;
  std::optional<int> path_rank;
  std::vector<Artifact> artifacts;
  double alert_sensitivity = 1.0;
  // Attacker-perceived value of gaining a foothold here.
  double value = 1.0;

  bool operator==(const HostNode&) const = default;
};

struct TriggerSpec {
  std::string trigger_id;
  std::vector<BiasKind> bias_targets;
  HostId host_id;
  int class_code = 0;
  std::vector<std::string> biased_signatures;
  std::vector<std::string> rational_signatures;
  double interaction_time_cost = 0.0;
  // Placed on host_id when the trigger is installed.
  std::vector<Artifact> artifacts;

  bool operator==(const TriggerSpec&) const = default;
};

struct Scenario {
  std::vector<HostNode> hosts;
  std::vector<std::pair<HostId, HostId>> edges;
  std::vector<HostId> attack_path;
  std::vector<TriggerSpec> triggers;
  HostId entry_host;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;

  const HostNode* find_host(std::string_view id) const;
  bool has_edge(std::string_view a, std::string_view b) const;
  std::vector<HostId> neighbors(std::string_view id) const;
  bool on_attack_path(std::string_view id) const;
  // Host artifacts plus those of every installed trigger on the host.
  std::vector<Artifact> visible_artifacts(std::string_view id) const;
};

struct TriggerId {
  BiasKind bias;
  int class_code;
  std::vector<int> instance;

  bool operator==(const TriggerId&) const = default;
};

// Parses `<letter>.<int>(.<int>)*`. Throws Error{UnknownBiasCode} for a letter
// outside B/L/A/C/S and Error{MalformedTriggerId} for any structural problem.
// Integers are plain decimal without sign or leading zeros so that
// render_trigger_id(parse_trigger_id(s)) == s.
TriggerId parse_trigger_id(std::string_view code);
std::string render_trigger_id(const TriggerId& id);

// Parses and validates a scenario document (JSON). Schema problems raise
// ConfigError naming the field path; invariant failures raise ScenarioInvalid
// listing every violation.
Scenario load_scenario(std::string_view config_text);
Scenario load_scenario_file(const std::string& path);
std::string scenario_to_json(const Scenario& s);

std::vector<std::string> validate_scenario(const Scenario& s);

// Copy of `s` with `trigger` installed (replacing any trigger with the same id).
Scenario with_trigger(const Scenario& s, const TriggerSpec& trigger);
// Copy of `s` with every trigger removed (the control condition).
Scenario without_triggers(const Scenario& s);

// {"candidates": [trigger, ...]} using the scenario trigger schema.
std::vector<TriggerSpec> load_triggers(std::string_view json_text);
std::string triggers_to_json(const std::vector<TriggerSpec>& triggers);

inline constexpr int kMaxPathRank = 12;

}  // namespace cogsim
