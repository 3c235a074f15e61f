#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogsim/telemetry.hpp"

namespace cogsim {

// A timestamped technique occurrence with target and outcome context.
struct TechniqueSignal {
  std::string technique_id;
  double timestamp = 0.0;
  HostId target_host;
  std::optional<bool> succeeded;
  std::vector<std::size_t> source_events;  // indices into the input event list

  bool operator==(const TechniqueSignal&) const = default;
};

struct MappingRule {
  std::string rule_id;
  EventKind event_kind = EventKind::Command;
  std::string payload_pattern;
  std::string technique_id;

  bool operator==(const MappingRule&) const = default;
};

struct RuleTable {
  std::vector<std::string> vocabulary;
  std::vector<MappingRule> rules;
  double success_window = 1.0;  // minutes to look for a session-open after a lateral command

  bool operator==(const RuleTable&) const = default;
};

// The synthetic rule table covering the agent's technique vocabulary.
RuleTable default_rule_table();

// Throws ConfigError on an empty pattern, a technique outside the vocabulary,
// a duplicate rule id or a non-positive window.
void validate_rule_table(const RuleTable& table);

RuleTable load_rule_table(std::string_view json_text);
RuleTable load_rule_table_file(const std::string& path);
std::string rule_table_to_json(const RuleTable& table);

// Maps events (stable-sorted by timestamp first) to technique signals. An
// event matching a rule opens a group that, for commands, also takes the
// following non-command events of the same actor up to the next command. The
// target is the flow destination, else the host of a session-open in the
// group, else the event host. Outcome: the command's own flag when present,
// else whether a session-open for the same actor on the target follows within
// the success window. Unmatched events are dropped. Throws
// Error{AmbiguousMapping} when one event matches rules for two techniques.
std::vector<TechniqueSignal> map_events(const std::vector<EventRecord>& events,
                                        const RuleTable& table);

}  // namespace cogsim
