#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cogsim/error.hpp"
#include "cogsim/telemetry.hpp"
#include "fixtures.hpp"

using namespace cogsim;

namespace {

ActionSpec make(const char* tech, const HostId& target, double p_detect, const std::string& cmd) {
  ActionSpec a;
  a.technique_id = tech;
  a.target_host = target;
  a.p_detect = p_detect;
  a.command = cmd;
  return a;
}

std::vector<EventKind> kinds(const std::vector<EventRecord>& ev) {
  std::vector<EventKind> out;
  for (const auto& e : ev) out.push_back(e.kind);
  return out;
}

}  // namespace

TEST_CASE("undetectable local action emits only its command", "[telemetry]") {
  RngStream rng(1);
  const auto ev = emit_events(make(technique::kAccountDiscovery, "a", 0.0, "cat /etc/passwd"), true, 2.0,
                              {"x", "a", 1.0}, rng);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].kind == EventKind::Command);
  CHECK(ev[0].succeeded == true);
  CHECK(ev[0].timestamp == 2.0);
}

TEST_CASE("certain detection on a lateral ssh", "[telemetry]") {
  RngStream rng(1);
  const auto ev = emit_events(make(technique::kRemoteServices, "b", 1.0, "ssh svc@b"), true, 0.0,
                              {"x", "a", 1.0}, rng);
  CHECK(kinds(ev) == std::vector{EventKind::Command, EventKind::Flow, EventKind::Alert, EventKind::Session});
  CHECK_FALSE(ev[0].succeeded.has_value());
  CHECK(ev[2].host == "b");
  CHECK(ev[3].payload == kSessionOpen);
}

TEST_CASE("alert rate follows the binomial", "[telemetry]") {
  RngStream rng(2024);
  const auto a = make(technique::kFileDiscovery, "a", 0.3, "find");
  int alerts = 0;
  for (int i = 0; i < 1000; ++i)
    for (const auto& e : emit_events(a, true, 0.0, {"x", "a", 1.0}, rng)) alerts += e.kind == EventKind::Alert;
  const double sigma = std::sqrt(1000 * 0.3 * 0.7);
  CHECK(std::abs(alerts - 300) <= 3 * sigma);
}

TEST_CASE("commands are attributed to the latest mentioned host", "[telemetry]") {
  const HostTable table{{"10.0.0.5", "site-proxy"}, {"it-ubuntu-1", "it-ubuntu-1"}};
  const auto out = attribute_commands({"nmap 10.0.0.5", "ls", "ssh it-ubuntu-1", "id"}, table, "entry");
  REQUIRE(out.size() == 4);
  CHECK(out[0].second == "site-proxy");
  CHECK(out[1].second == "site-proxy");
  CHECK(out[2].second == "it-ubuntu-1");
  CHECK(out[3].second == "it-ubuntu-1");
  CHECK(out[1].first == "ls");

  for (const auto& [cmd, host] : attribute_commands({"ls", "id"}, table, "entry")) CHECK(host == "entry");
  CHECK(attribute_commands({"scp it-ubuntu-1:/x 10.0.0.5:/y"}, table, "entry")[0].second == "it-ubuntu-1");
}

TEST_CASE("host mentions respect token boundaries", "[telemetry]") {
  const HostTable table{{"10.0.0.5", "p"}, {"10.0.0.50", "q"}, {"web", "w"}};
  CHECK(first_mention("ping 10.0.0.50", table) == "q");
  CHECK_FALSE(first_mention("curl webhook", table).has_value());
  CHECK(first_mention("curl http://web/", table) == "w");
}

TEST_CASE("event log round trip", "[telemetry]") {
  std::vector<EventRecord> ev{{0.5, EventKind::Command, "a", "x", "ls", true},
                              {1.25, EventKind::Alert, "a", "x", "SIG-x", std::nullopt},
                              {2.0, EventKind::Session, "b", "x", kSessionOpen, std::nullopt}};
  const EventLog log = parse_event_log(write_event_log(ev));
  CHECK(log.events == ev);
  CHECK(log.warnings.empty());
  CHECK(parse_event_log("").events.empty());
}

TEST_CASE("bad event lines", "[telemetry]") {
  const std::string good = write_event_line({0.0, EventKind::Command, "a", "x", "ls", std::nullopt});
  const std::string bad = R"({"timestamp": 1, "kind": "foo", "host": "a", "actor": "x", "payload": "", "succeeded": null})";
  try {
    parse_event_log(good + "\n" + bad + "\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_event_log("not json\n"), Error);
}

TEST_CASE("out of order timestamps are kept with a warning", "[telemetry]") {
  std::vector<EventRecord> ev{{3.0, EventKind::Command, "a", "x", "ls", true},
                              {1.0, EventKind::Command, "a", "x", "id", true}};
  const EventLog log = parse_event_log(write_event_log(ev));
  CHECK(log.events.size() == 2);
  CHECK(log.warnings.size() == 1);
}

TEST_CASE("scenario host table covers names and addresses", "[telemetry]") {
  const HostTable t = host_table_for(fixtures::canonical());
  const auto* h = fixtures::canonical().find_host("it-ubuntu-1");
  CHECK(first_mention("ssh root@" + h->ip, t) == "it-ubuntu-1");
}
