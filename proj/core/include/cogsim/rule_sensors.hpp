#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogsim/telemetry.hpp"

namespace cogsim {

// Expert-knowledge rule for one trigger: where to look, what to skip, and
// which payloads indicate the biased or the rational path.
struct EkmRule {
  std::string trigger_id;
  int version = 1;
  std::set<HostId> host_scope;
  // Minutes relative to the first in-scope biased/rational match.
  std::optional<std::pair<double, double>> window;
  std::vector<std::string> biased_patterns;
  std::vector<std::string> rational_patterns;
  std::vector<std::string> exclusions;

  bool operator==(const EkmRule&) const = default;
};

struct EkmCounts {
  std::string trigger_id;
  int biased_count = 0;
  int rational_count = 0;
  std::vector<std::size_t> biased_events;
  std::vector<std::size_t> rational_events;

  bool operator==(const EkmCounts&) const = default;
};

// Violations of the rule invariants (disjoint pattern lists, ordered window).
std::vector<std::string> validate_ekm_rule(const EkmRule& rule);

// Counts in-scope events (inside the window when one is set) that match no
// exclusion; biased patterns are tried before rational ones and events matching
// neither are ignored.
EkmCounts apply_ekm(const std::vector<EventRecord>& events, const EkmRule& rule);

EkmRule ekm_b211_rule();
EkmRule ekm_l121_rule();

std::vector<EkmRule> load_ekm_rules(std::string_view json_text);
std::vector<EkmRule> load_ekm_rules_file(const std::string& path);
std::string ekm_rules_to_json(const std::vector<EkmRule>& rules);

struct CountsRow {
  std::string participant;
  EkmCounts counts;
};
// participant,trigger,biased,rational
std::string ekm_counts_csv(const std::vector<CountsRow>& rows);

struct SurveillanceConfig {
  double aggressive_weight = 0.5;
  double alert_weight = 0.5;
  double alert_cap = 20.0;
  std::vector<std::string> aggressive_patterns{"nmap *-T4*", "nmap *-T5*", "hydra*",
                                               "msfconsole*"};
  std::vector<std::string> verification_commands{"sudo -l", "id", "groups"};
  std::vector<std::string> pipe_filters{"grep", "awk"};
};

// Early boldness: weighted share of aggressive commands plus capped alert
// volume, both restricted to timestamps <= horizon, clamped to [0,1].
double risk_tolerance_score(const std::vector<EventRecord>& events, double horizon,
                            const SurveillanceConfig& cfg = {});

// Share of verification commands minus the share of consecutive identical
// command pairs, clamped to [0,1].
double cognitive_reflection_score(const std::vector<std::string>& commands,
                                  const SurveillanceConfig& cfg = {});

}  // namespace cogsim
