#include "cogsim/telemetry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "cogsim/error.hpp"

namespace cogsim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Command: return "command";
    case EventKind::Alert: return "alert";
    case EventKind::Flow: return "flow";
    case EventKind::Session: return "session";
  }
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (auto k : {EventKind::Command, EventKind::Alert, EventKind::Flow, EventKind::Session}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string alert_signature(const std::string& technique_id) { return "SIG-" + technique_id; }

std::vector<EventRecord> emit_events(const ActionSpec& action, bool succeeded, double state_clock,
                                     const EmitContext& ctx, RngStream& rng) {
  std::vector<EventRecord> out;
  const bool lateral = technique::is_lateral(action.technique_id);
  EventRecord cmd{state_clock, EventKind::Command, ctx.source_host, ctx.actor, action.command,
                  std::nullopt};
  if (!lateral) cmd.succeeded = succeeded;
  out.push_back(std::move(cmd));

  if (action.target_host != ctx.source_host) {
    out.push_back({state_clock, EventKind::Flow, ctx.source_host, ctx.actor,
                   ctx.source_host + "->" + action.target_host + ":22/tcp", std::nullopt});
  }
  const double p_alert = std::min(1.0, action.p_detect * ctx.target_sensitivity);
  if (rng.bernoulli(p_alert)) {
    out.push_back({state_clock, EventKind::Alert, action.target_host, ctx.actor,
                   alert_signature(action.technique_id), std::nullopt});
  }
  if (lateral && succeeded) {
    out.push_back({state_clock, EventKind::Session, action.target_host, ctx.actor, kSessionOpen,
                   std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON lines

namespace {

double round_millis(double t) { return std::round(t * 1000.0) / 1000.0; }

}  // namespace

std::string write_event_line(const EventRecord& e) {
  nlohmann::ordered_json j;
  j["timestamp"] = round_millis(e.timestamp);
  j["kind"] = std::string(to_string(e.kind));
  j["host"] = e.host;
  j["actor"] = e.actor;
  j["payload"] = e.payload;
  if (e.succeeded) j["succeeded"] = *e.succeeded;
  else j["succeeded"] = nullptr;
  return j.dump();
}

std::string write_event_log(const std::vector<EventRecord>& events) {
  std::string out;
  for (const auto& e : events) {
    out += write_event_line(e);
    out += '\n';
  }
  return out;
}

EventLog parse_event_log(std::string_view text) {
  EventLog log;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    auto fail = [&](const std::string& why) -> void {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line.begin(), line.end());
    } catch (const nlohmann::json::parse_error&) {
      fail("invalid JSON");
    }
    if (!j.is_object()) fail("expected object");
    for (const char* key : {"timestamp", "kind", "host", "actor", "payload"}) {
      if (!j.contains(key)) fail(std::string("missing field ") + key);
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const std::vector<std::string> known{"timestamp", "kind",    "host",
                                                  "actor",     "payload", "succeeded"};
      if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
        fail("unknown field " + it.key());
      }
    }
    EventRecord e;
    if (!j["timestamp"].is_number()) fail("timestamp must be a number");
    e.timestamp = j["timestamp"].get<double>();
    if (!(e.timestamp >= 0.0)) fail("timestamp negative");
    if (!j["kind"].is_string()) fail("kind must be a string");
    auto kind = event_kind_from_string(j["kind"].get<std::string>());
    if (!kind) fail("unknown kind \"" + j["kind"].get<std::string>() + "\"");
    e.kind = *kind;
    for (const char* key : {"host", "actor", "payload"}) {
      if (!j[key].is_string()) fail(std::string(key) + " must be a string");
    }
    e.host = j["host"].get<std::string>();
    e.actor = j["actor"].get<std::string>();
    e.payload = j["payload"].get<std::string>();
    if (e.payload.empty()) fail("payload empty");
    if (j.contains("succeeded") && !j["succeeded"].is_null()) {
      if (!j["succeeded"].is_boolean()) fail("succeeded must be boolean or null");
      e.succeeded = j["succeeded"].get<bool>();
    }
    if (!log.events.empty() && e.timestamp < log.events.back().timestamp) {
      log.warnings.push_back("line " + std::to_string(line_no) + ": timestamp out of order");
    }
    log.events.push_back(std::move(e));
  }
  return log;
}

// ---------------------------------------------------------------------------
// Attribution

HostTable host_table_for(const Scenario& scenario) {
  HostTable t;
  for (const auto& h : scenario.hosts) {
    t.emplace_back(h.host_id, h.host_id);
    if (h.display_name != h.host_id) t.emplace_back(h.display_name, h.host_id);
    t.emplace_back(h.ip, h.host_id);
  }
  return t;
}

namespace {

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool bounded(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos > 0) {
    const char prev = s[pos - 1];
    if (name_char(prev)) return false;
    if (prev == '.' && pos > 1 && alnum(s[pos - 2])) return false;
  }
  const std::size_t after = pos + len;
  if (after < s.size()) {
    const char next = s[after];
    if (name_char(next)) return false;
    if (next == '.' && after + 1 < s.size() && alnum(s[after + 1])) return false;
  }
  return true;
}

}  // namespace

std::optional<HostId> first_mention(std::string_view command, const HostTable& table) {
  std::size_t best_pos = std::string_view::npos;
  std::size_t best_len = 0;
  const HostId* best = nullptr;
  for (const auto& [key, host] : table) {
    if (key.empty()) continue;
    std::size_t pos = command.find(key);
    while (pos != std::string_view::npos && !bounded(command, pos, key.size())) {
      pos = command.find(key, pos + 1);
    }
    if (pos == std::string_view::npos) continue;
    if (pos < best_pos || (pos == best_pos && key.size() > best_len)) {
      best_pos = pos;
      best_len = key.size();
      best = &host;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

std::vector<std::pair<std::string, HostId>> attribute_commands(
    const std::vector<std::string>& commands, const HostTable& table, const HostId& initial_host) {
  std::vector<std::pair<std::string, HostId>> out;
  out.reserve(commands.size());
  HostId current = initial_host;
  for (const auto& c : commands) {
    if (auto h = first_mention(c, table)) current = *h;
    out.emplace_back(c, current);
  }
  return out;
}

std::vector<std::string> command_lines(const std::vector<EventRecord>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::Command) out.push_back(e.payload);
  }
  return out;
}

}  // namespace cogsim
