#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/range_model.hpp"
#include "cogsim/rng.hpp"

namespace cogsim {

enum class EventKind { Command, Alert, Flow, Session };

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct EventRecord {
  double timestamp = 0.0;  // minutes from session start
  EventKind kind = EventKind::Command;
  HostId host;
  std::string actor;
  std::string payload;
  std::optional<bool> succeeded;

  bool operator==(const EventRecord&) const = default;
};

inline constexpr const char* kSessionOpen = "open";
inline constexpr const char* kSessionClose = "close";

struct EmitContext {
  std::string actor;
  HostId source_host;              // where the command is typed
  double target_sensitivity = 1.0;  // alert_sensitivity of the action's target
};

// Telemetry for one executed action, in this order: the command record (its
// succeeded flag left empty for lateral actions, whose outcome is only
// visible through the session record); a flow record when the action crosses
// hosts; an alert "SIG-<technique>" at the target with probability
// min(1, p_detect * sensitivity); a session-open at the target after a
// successful lateral move. Exactly one uniform is drawn per call.
std::vector<EventRecord> emit_events(const ActionSpec& action, bool succeeded, double state_clock,
                                     const EmitContext& ctx, RngStream& rng);

std::string alert_signature(const std::string& technique_id);

// Event log: one JSON object per line with fields timestamp, kind, host,
// actor, payload, succeeded (null when unknown). Timestamps are rounded to
// milliminutes.
std::string write_event_log(const std::vector<EventRecord>& events);
std::string write_event_line(const EventRecord& e);

struct EventLog {
  std::vector<EventRecord> events;
  std::vector<std::string> warnings;  // e.g. out-of-order timestamps
};

// Throws Error{ParseError} naming the 1-based line of the first bad record.
EventLog parse_event_log(std::string_view text);

// Name or IP -> host id lookup used to attribute commands.
using HostTable = std::vector<std::pair<std::string, HostId>>;

// Host ids, display names and IPs of every scenario host.
HostTable host_table_for(const Scenario& scenario);

// Leftmost host mention in `command` (names and IPs match only on token
// boundaries, the longer key winning at equal positions).
std::optional<HostId> first_mention(std::string_view command, const HostTable& table);

// First-appearance attribution: every command belongs to the host most
// recently mentioned at or before it; commands before any mention belong to
// `initial_host`.
std::vector<std::pair<std::string, HostId>> attribute_commands(
    const std::vector<std::string>& commands, const HostTable& table, const HostId& initial_host);

std::vector<std::string> command_lines(const std::vector<EventRecord>& events);

}  // namespace cogsim
