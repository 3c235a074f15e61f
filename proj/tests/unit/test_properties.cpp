#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <regex>

#include "cogsim/cogvuln_sensor.hpp"
#include "cogsim/error.hpp"
#include "cogsim/metrics_stats.hpp"
#include "cogsim/pattern.hpp"
#include "cogsim/rng.hpp"
#include "fixtures.hpp"

using namespace cogsim;

namespace {

SignalContext random_context(RngStream& rng, const std::vector<std::string>& techs) {
  SignalContext c;
  c.signal.technique_id = techs[rng.below(techs.size())];
  c.signal.succeeded = rng.bernoulli(0.5);
  const int n = static_cast<int>(rng.below(5));
  for (int i = 0; i < n; ++i) c.available_risks.push_back(rng.uniform());
  if (rng.bernoulli(0.7)) {
    TechniqueSignal p;
    p.technique_id = techs[rng.below(techs.size())];
    p.succeeded = rng.bernoulli(0.5);
    c.prev_signal = p;
  }
  const int tries = static_cast<int>(rng.below(10));
  c.tally_snapshot[c.signal.technique_id] = {static_cast<int>(rng.below(tries + 1)), tries};
  c.target_sunk_cost = rng.uniform() * 50;
  c.expected_future_value = rng.uniform() * 4 - 2;
  c.reengagement = rng.bernoulli(0.5);
  static const char* names[] = {"admin-console", "jsmith", "root-ca", "budget-q3", "svc", "passwords"};
  c.target_name = names[rng.below(6)];
  return c;
}

}  // namespace

TEST_CASE("updaters stay inside the unit interval and are pure", "[property]") {
  const SensorConfig cfg = default_sensor_config();
  std::vector<std::string> techs;
  for (const auto& [t, _] : cfg.detection_risk) techs.push_back(t);
  RngStream rng(1);
  int bad = 0, impure = 0;
  for (int i = 0; i < 100000; ++i) {
    const SignalContext c = random_context(rng, techs);
    BeliefState s;
    for (BiasKind k : kAllBiases) s.b[k] = rng.uniform();
    if (i % 10 == 0)
      for (BiasKind k : kAllBiases) s.b[k] = rng.bernoulli(0.5) ? 0.0 : 1.0;
    const BeliefState out = apply_updates(s, c, cfg);
    for (BiasKind k : kAllBiases) bad += !(out.b[k] >= 0.0 && out.b[k] <= 1.0);
    if (i % 100 == 0) impure += !(apply_updates(s, c, cfg) == out);
  }
  CHECK(bad == 0);
  CHECK(impure == 0);
}

TEST_CASE("normalization sums to one and keeps the argmax", "[property]") {
  RngStream rng(2);
  for (int i = 0; i < 10000; ++i) {
    BeliefState s;
    for (BiasKind k : kAllBiases) s.b[k] = rng.uniform();
    const BiasVector n = normalize_beliefs(s);
    double sum = 0;
    for (double v : n.values) sum += v;
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    REQUIRE(argmax_bias(n) == argmax_bias(s.b));
  }
}

TEST_CASE("rank tests ignore monotone transforms", "[property]") {
  RngStream rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::vector<double>> g(2 + rng.below(3));
    for (auto& grp : g)
      for (std::size_t i = 0, n = 2 + rng.below(6); i < n; ++i) grp.push_back(std::floor(rng.uniform() * 10));
    auto t = g;
    for (auto& grp : t)
      for (double& v : grp) v = std::exp(v / 3.0) * 7 - 2;
    CHECK(kruskal_wallis(g).statistic == kruskal_wallis(t).statistic);
    CHECK(mann_whitney_u(g[0], g[1]).p == mann_whitney_u(t[0], t[1]).p);
  }
}

TEST_CASE("mann whitney statistics are complementary", "[property]") {
  RngStream rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a, b;
    for (std::size_t i = 0, n = 1 + rng.below(12); i < n; ++i) a.push_back(std::floor(rng.uniform() * 6));
    for (std::size_t i = 0, n = 1 + rng.below(12); i < n; ++i) b.push_back(std::floor(rng.uniform() * 6));
    const auto ab = mann_whitney_u(a, b), ba = mann_whitney_u(b, a);
    CHECK(ab.statistic + ba.statistic == Catch::Approx(double(a.size() * b.size())));
    CHECK(ab.p == Catch::Approx(ba.p).margin(1e-12));
    CHECK(ab.p >= 0.0);
    CHECK(ab.p <= 1.0);
  }
}

TEST_CASE("glob patterns agree with a regex translation", "[property]") {
  RngStream rng(5);
  const std::string alphabet = "ab-*";
  for (int rep = 0; rep < 5000; ++rep) {
    std::string pat, text;
    for (std::size_t i = 0, n = 1 + rng.below(5); i < n; ++i) pat += alphabet[rng.below(4)];
    for (std::size_t i = 0, n = rng.below(8); i < n; ++i) text += alphabet[rng.below(3)];
    std::string re = ".*";
    for (char c : pat) re += c == '*' ? std::string(".*") : (c == '-' ? std::string("\\-") : std::string(1, c));
    re += ".*";
    INFO(pat << " / " << text);
    REQUIRE(pattern_matches(pat, text) == std::regex_match(text, std::regex(re)));
  }
}

TEST_CASE("fuzzed trigger ids never crash the parser", "[property]") {
  RngStream rng(6);
  const std::string alphabet = "BLACSXb0123.-9 ";
  for (int rep = 0; rep < 5000; ++rep) {
    std::string id;
    for (std::size_t i = 0, n = rng.below(9); i < n; ++i) id += alphabet[rng.below(alphabet.size())];
    try {
      const TriggerId t = parse_trigger_id(id);
      CHECK(render_trigger_id(t) == id);
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::MalformedTriggerId || e.code() == ErrorCode::UnknownBiasCode));
    }
  }
}
