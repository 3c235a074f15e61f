#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cogsim/error.hpp"
#include "cogsim/metrics_stats.hpp"
#include "cogsim/rng.hpp"
#include "fixtures.hpp"

using namespace cogsim;
using Catch::Approx;

namespace {

Attributed at(std::initializer_list<const char*> hosts) {
  Attributed out;
  for (const char* h : hosts) out.emplace_back("ls", h);
  return out;
}

TriggerSpec trigger_at(const HostId& host) {
  TriggerSpec t;
  t.trigger_id = "B.2.1.1";
  t.host_id = host;
  t.biased_signatures = {"su *-adm*"};
  t.rational_signatures = {"sudo -l"};
  return t;
}

EventRecord cmd(double t, const HostId& host, const std::string& payload) {
  return {t, EventKind::Command, host, "x", payload, true};
}

}  // namespace

TEST_CASE("progress rank", "[metrics]") {
  const Scenario& s = fixtures::canonical();
  CHECK(progress_rank(at({"red-entry", "red-entry"}), s) == 1);
  CHECK(progress_rank(at({"red-entry", "site-web", "it-ubuntu-1", "site-web"}), s) == 2);
  Attributed all;
  for (const auto& h : s.attack_path) all.emplace_back("ls", h);
  CHECK(progress_rank(all, s) == 12);
  CHECK(progress_rank({}, s) == 1);
}

TEST_CASE("progress rank prefers successful lateral signals", "[metrics]") {
  const Scenario& s = fixtures::canonical();
  TechniqueSignal ok{"lateral-movement/remote-services", 1.0, "site-web", true, {}};
  TechniqueSignal failed{"lateral-movement/remote-services", 2.0, "it-ubuntu-1", false, {}};
  CHECK(progress_rank(at({"it-jump"}), s, {ok, failed}) == 1);
}

TEST_CASE("on path proportion", "[metrics]") {
  const Scenario& s = fixtures::canonical();
  Attributed a;
  for (int i = 0; i < 13; ++i) a.emplace_back("ls", "site-web");
  for (int i = 0; i < 7; ++i) a.emplace_back("ls", "admin-console");
  CHECK(on_path_proportion(a, s) == Approx(0.65));
  CHECK(on_path_proportion(at({"site-web", "it-ubuntu-1"}), s) == 1.0);
}

TEST_CASE("on path proportion matches a direct count", "[metrics]") {
  const Scenario& s = fixtures::canonical();
  RngStream rng(9);
  Attributed a;
  int on = 0;
  for (int i = 0; i < 50; ++i) {
    const auto& h = s.hosts[rng.below(s.hosts.size())];
    a.emplace_back("x", h.host_id);
    for (const auto& p : s.attack_path) on += p == h.host_id;
  }
  CHECK(on_path_proportion(a, s) == on / 50.0);
}

TEST_CASE("detectability", "[metrics]") {
  std::vector<EventRecord> ev;
  CHECK(detectability_count(ev, "h") == 0);
  for (int i = 0; i < 3; ++i) ev.push_back({double(i), EventKind::Alert, "h", "x", "SIG", std::nullopt});
  for (int i = 0; i < 2; ++i) ev.push_back({double(i), EventKind::Alert, "g", "x", "SIG", std::nullopt});
  ev.push_back(cmd(1, "h", "ls"));
  CHECK(detectability_count(ev, "h") == 3);
  const auto by = alert_counts_by_host(ev);
  CHECK(by.at("h") == 3);
  CHECK(by.at("g") == 2);

  RngStream rng(4);
  std::vector<EventRecord> gen;
  int expect = 0;
  for (int i = 0; i < 200; ++i) {
    const bool is_alert = rng.bernoulli(0.5);
    const HostId host = rng.bernoulli(0.3) ? "h" : "g";
    gen.push_back({double(i), is_alert ? EventKind::Alert : EventKind::Command, host, "x", "p", std::nullopt});
    expect += is_alert && host == "h";
  }
  CHECK(detectability_count(gen, "h") == expect);
}

TEST_CASE("trigger interaction time", "[metrics]") {
  const TriggerSpec t = trigger_at("it-ubuntu-1");
  CHECK(trigger_interaction_time({}, t, 5) == 0.0);
  CHECK(trigger_interaction_time({cmd(1, "site-web", "su backup-adm")}, t, 5) == 0.0);
  const std::vector<EventRecord> near{cmd(10, "it-ubuntu-1", "sudo -l"), cmd(13, "it-ubuntu-1", "su backup-adm")};
  CHECK(trigger_interaction_time(near, t, 5) == Approx(3 + kInteractionFloorMinutes));
  const std::vector<EventRecord> far{cmd(10, "it-ubuntu-1", "sudo -l"), cmd(40, "it-ubuntu-1", "su backup-adm")};
  CHECK(trigger_interaction_time(far, t, 5) == Approx(2 * kInteractionFloorMinutes));
}

TEST_CASE("mann whitney small exact", "[stats]") {
  const auto r = mann_whitney_u({1, 2}, {3, 4});
  CHECK(r.statistic == 0.0);
  CHECK(r.exact);
  CHECK(r.p == Approx(1.0 / 3.0));
  CHECK(mann_whitney_u({1, 2, 3}, {1, 2, 3}).p == Approx(1.0));
  CHECK(mann_whitney_u({5, 5}, {5, 5, 5}).p == 1.0);
  CHECK(mann_whitney_u({3, 4}, {1, 2}).statistic == 4.0);
}

TEST_CASE("reference p values", "[stats]") {
  // Reference values from an independent implementation.
  const std::vector<double> a{0.11, 0.52, 0.33, 0.94, 0.25, 0.76, 0.47, 0.68};
  const std::vector<double> b{0.59, 1.02, 0.81, 1.13, 0.44, 0.97, 0.71, 1.25};
  CHECK(mann_whitney_exact(a, b).statistic == 11.0);
  CHECK(mann_whitney_exact(a, b).p == Approx(0.028127428127428127).epsilon(1e-9));
  CHECK(mann_whitney_normal(a, b).p == Approx(0.031324130877889995).epsilon(1e-9));
  const auto big = mann_whitney_u({1, 2, 2, 3, 5, 8, 8, 9, 10}, {2, 4, 6, 6, 7, 11, 12, 12, 13, 15});
  CHECK_FALSE(big.exact);
  CHECK(big.statistic == 24.0);
  CHECK(big.p == Approx(0.0931558064764345).epsilon(1e-9));
}

TEST_CASE("normal approximation tracks the exact test at n = 8", "[stats]") {
  // The continuity-corrected approximation can be up to ~0.019 off at 8 vs 8.
  RngStream rng(321);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a, b;
    for (int i = 0; i < 8; ++i) a.push_back(rng.uniform());
    for (int i = 0; i < 8; ++i) b.push_back(rng.uniform() + 0.3);
    worst = std::max(worst, std::abs(mann_whitney_exact(a, b).p - mann_whitney_normal(a, b).p));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("kruskal wallis", "[stats]") {
  const auto r = kruskal_wallis({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  CHECK(r.statistic == Approx(7.2));
  CHECK(r.p == Approx(std::exp(-3.6)).epsilon(1e-9));
  const auto same = kruskal_wallis({{1, 2, 3}, {1, 2, 3}});
  CHECK(same.statistic == Approx(0.0).margin(1e-12));
  CHECK(same.p == Approx(1.0));
  try {
    kruskal_wallis({{1, 2, 3}});
    FAIL("expected InsufficientGroups");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientGroups);
  }
}

TEST_CASE("chi square tail and helpers", "[stats]") {
  CHECK(chi_square_sf(0, 3) == 1.0);
  CHECK(chi_square_sf(3.841458820694124, 1) == Approx(0.05).epsilon(1e-6));
  CHECK(chi_square_sf(2 * 3.0, 2) == Approx(std::exp(-3.0)));
  CHECK(midranks({10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});
  CHECK(mean({1, 2, 3, 6}) == 3.0);
  CHECK(median({5, 1, 3}) == 3.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK(welch_t({1, 1}, {1, 1}) == 0.0);
  CHECK(welch_t({1, 2, 3}, {4, 5, 6}) == Approx(-3.0 / std::sqrt(2.0 / 3.0)));
}

TEST_CASE("summary csv has fixed columns", "[metrics]") {
  SessionSummary a, b;
  a.session_id = "T-0000";
  a.alert_counts = {{"h", 2}};
  b.session_id = "C-0001";
  b.trigger_times = {{"B.2.1.1", 1.5}};
  const std::string csv = session_summary_csv({a, b});
  std::vector<std::size_t> commas;
  std::size_t start = 0;
  while (start < csv.size()) {
    const std::size_t end = csv.find('\n', start);
    const std::string line = csv.substr(start, end - start);
    commas.push_back(std::count(line.begin(), line.end(), ','));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  REQUIRE(commas.size() >= 3);
  CHECK(commas[0] == commas[1]);
  CHECK(commas[1] == commas[2]);
}
