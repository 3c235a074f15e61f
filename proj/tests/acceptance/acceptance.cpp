// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/cogvuln_sensor.hpp"
#include "cogsim/error.hpp"
#include "cogsim/harness.hpp"
#include "cogsim/metrics_stats.hpp"
#include "cogsim/range_model.hpp"
#include "cogsim/rng.hpp"
#include "cogsim/telemetry.hpp"

using namespace cogsim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace tol {
constexpr int kUpdaterSamples = 100000;        // per bias
constexpr double kNormSum = 1e-9;
constexpr double kBoundsSeconds = 10.0;
constexpr double kOracle = 1e-12;
constexpr int kLambdaSamples = 10000;
constexpr int kRandomLogs = 100;
constexpr int kLogLength = 50;
constexpr double kMinAccuracy = 0.6;
constexpr double kIdentifiabilitySeconds = 120.0;
constexpr double kApproxGap = 0.01;
constexpr int kApproxTrials = 100;
constexpr int kFuzzedIds = 1000;
}  // namespace tol

namespace {

const std::string kData = COGSIM_DATA_DIR;
const std::string kTmp = COGSIM_TEST_TMP;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %-4s %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

Outcome belief_bounds() {
  const auto t0 = Clock::now();
  const SensorConfig cfg = default_sensor_config();
  std::vector<std::string> techs;
  for (const auto& [t, _] : cfg.detection_risk) techs.push_back(t);
  static const char* names[] = {"admin-console", "jsmith", "root-ca", "budget-q3", "svc-backup", ""};
  RngStream rng(101);
  long out_of_range = 0;
  for (BiasKind bias : kAllBiases) {
    for (int i = 0; i < tol::kUpdaterSamples; ++i) {
      SignalContext c;
      c.signal.technique_id = techs[rng.below(techs.size())];
      c.signal.succeeded = rng.bernoulli(0.5);
      for (std::size_t k = 0, n = rng.below(6); k < n; ++k) c.available_risks.push_back(rng.uniform());
      if (rng.bernoulli(0.8)) {
        TechniqueSignal p;
        p.technique_id = techs[rng.below(techs.size())];
        p.succeeded = rng.bernoulli(0.5);
        c.prev_signal = p;
      }
      const int tries = static_cast<int>(rng.below(12));
      c.tally_snapshot[c.signal.technique_id] = {static_cast<int>(rng.below(tries + 1)), tries};
      c.target_sunk_cost = rng.uniform() * 100;
      c.expected_future_value = rng.uniform() * 6 - 3;
      c.reengagement = rng.bernoulli(0.5);
      c.target_name = names[rng.below(6)];
      double b = rng.uniform();
      if (i % 20 == 0) b = rng.bernoulli(0.5) ? 0.0 : 1.0;
      double out = 0;
      switch (bias) {
        case BiasKind::LossAversion: out = update_loss_aversion(b, c, cfg); break;
        case BiasKind::BaseRateNeglect: out = update_base_rate_neglect(b, c, cfg); break;
        case BiasKind::Confirmation: out = update_confirmation(b, c, cfg); break;
        case BiasKind::SunkCost: out = update_sunk_cost(b, c, cfg); break;
        case BiasKind::Availability: out = update_availability(b, c, cfg); break;
      }
      out_of_range += !(out >= 0.0 && out <= 1.0);
    }
  }
  double worst_sum = 0;
  int argmax_changed = 0;
  for (int i = 0; i < tol::kUpdaterSamples; ++i) {
    BeliefState s;
    for (BiasKind k : kAllBiases) s.b[k] = rng.uniform();
    const BiasVector n = normalize_beliefs(s);
    double sum = 0;
    for (double v : n.values) sum += v;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    argmax_changed += argmax_bias(n) != argmax_bias(s.b);
  }
  const double secs = seconds_since(t0);
  return {out_of_range == 0 && worst_sum <= tol::kNormSum && argmax_changed == 0 && secs < tol::kBoundsSeconds,
          fmt("%ld out of range over %d x 5 calls, max |sum-1| %.2e, argmax changes %d, %.2f s", out_of_range,
              tol::kUpdaterSamples, worst_sum, argmax_changed, secs)};
}

Outcome updater_oracles() {
  SensorConfig cfg = default_sensor_config();
  const std::string tech = technique::kRemoteServices;
  SignalContext c;
  c.signal.technique_id = tech;
  c.signal.succeeded = true;

  std::vector<std::pair<double, double>> got;  // (value, expected)
  cfg.detection_risk[tech] = 0.2;
  c.available_risks = {0.2, 0.9};
  got.emplace_back(update_loss_aversion(0.5, c, cfg), 0.55);

  TechniqueSignal prev;
  prev.technique_id = tech;
  prev.succeeded = true;
  c.prev_signal = prev;
  got.emplace_back(update_base_rate_neglect(0.3, c, cfg), 0.349);

  cfg.technique_priors[tech] = 0.6;
  c.tally_snapshot[tech] = {1, 4};
  got.emplace_back(update_confirmation(0.2, c, cfg), 0.48);

  c.reengagement = true;
  c.expected_future_value = -2;
  c.target_sunk_cost = 3;
  got.emplace_back(update_sunk_cost(0.5, c, cfg), 0.5 + 0.1 / 3.0);

  c.target_name = "admin-files";
  got.emplace_back(update_availability(0.4, c, cfg), 0.46);

  double worst = 0;
  std::string vals;
  for (const auto& [v, e] : got) {
    worst = std::max(worst, std::abs(v - e));
    vals += fmt("%.4f ", v);
  }
  return {worst <= tol::kOracle, fmt("values %smax error %.1e", vals.c_str(), worst)};
}

Outcome sunk_cost_rule() {
  const Scenario s = load_scenario_file(kData + "/canonical_scenario.json");
  AttackerState st = initial_state(s);
  BiasProfile p = zero_bias_profile();
  auto eval = [&](double er, double lambda, double sc) {
    p.lambda_sunk = lambda;
    st.sunk_cost["x"] = sc;
    return continue_target(st, "x", p, er);
  };
  const bool examples = eval(5, 0.5, 8) && !eval(-3, 0, 10) && eval(-3, 0.5, 10);
  RngStream rng(303);
  int mismatches = 0;
  for (int i = 0; i < tol::kLambdaSamples; ++i) {
    const double er = rng.uniform() * 20 - 10;
    const double sc = rng.uniform() * 50;
    mismatches += eval(er, 0.0, sc) != (er >= 0.0);
  }
  mismatches += eval(0.0, 0.0, 7.0) != true;
  return {examples && mismatches == 0,
          fmt("examples %s, lambda=0 mismatches %d / %d", examples ? "exact" : "wrong", mismatches,
              tol::kLambdaSamples)};
}

// Random command log over the canonical hosts.
std::vector<std::string> random_log(const Scenario& s, RngStream& rng, int n) {
  static const char* verbs[] = {"ssh ", "nmap -sV ", "ping -c1 ", "scp x ", "curl http://", "hydra -l root ssh://"};
  static const char* bare[] = {"ls -la", "id", "whoami", "cat /etc/passwd", "sudo -l", "find / -name x"};
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(0.4)) {
      out.emplace_back(bare[rng.below(6)]);
      continue;
    }
    const HostNode& h = s.hosts[rng.below(s.hosts.size())];
    std::string ref;
    switch (rng.below(4)) {
      case 0: ref = h.host_id; break;
      case 1: ref = h.ip; break;
      case 2: ref = "svc@" + h.display_name; break;
      default: ref = h.ip + ":22"; break;
    }
    std::string cmd = verbs[rng.below(6)] + ref;
    if (rng.bernoulli(0.2)) {
      const HostNode& g = s.hosts[rng.below(s.hosts.size())];
      cmd += " " + g.host_id;
    }
    out.push_back(cmd);
  }
  return out;
}

Outcome on_path_oracle() {
  const Scenario s = load_scenario_file(kData + "/canonical_scenario.json");
  RngStream rng(404);
  int mismatches = 0;
  for (int rep = 0; rep < tol::kRandomLogs; ++rep) {
    Attributed a;
    int on = 0;
    for (int i = 0; i < tol::kLogLength; ++i) {
      const HostId h = s.hosts[rng.below(s.hosts.size())].host_id;
      a.emplace_back("cmd", h);
      on += std::count(s.attack_path.begin(), s.attack_path.end(), h) > 0;
    }
    mismatches += on_path_proportion(a, s) != static_cast<double>(on) / tol::kLogLength;
  }
  return {mismatches == 0, fmt("%d mismatches over %d logs of %d commands", mismatches, tol::kRandomLogs,
                               tol::kLogLength)};
}

// Token-based attribution written independently of the library: a mention is
// a maximal run of [A-Za-z0-9._-] (outer dots trimmed) equal to a host key.
std::vector<HostId> reference_attribution(const std::vector<std::string>& cmds, const HostTable& table,
                                          const HostId& initial) {
  std::map<std::string, HostId> keys(table.begin(), table.end());
  auto token_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_'; };
  std::vector<HostId> out;
  HostId cur = initial;
  for (const auto& c : cmds) {
    for (std::size_t i = 0; i < c.size();) {
      if (!token_char(c[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < c.size() && token_char(c[j])) ++j;
      std::string tok = c.substr(i, j - i);
      while (!tok.empty() && tok.front() == '.') tok.erase(tok.begin());
      while (!tok.empty() && tok.back() == '.') tok.pop_back();
      if (auto it = keys.find(tok); it != keys.end()) {
        cur = it->second;
        break;
      }
      i = j;
    }
    out.push_back(cur);
  }
  return out;
}

Outcome attribution_oracle() {
  const Scenario s = load_scenario_file(kData + "/canonical_scenario.json");
  const HostTable table = host_table_for(s);
  const std::vector<std::string> fixture{
      "whoami",                              // red-entry
      "nmap -sV -T4 10.1.1.0/24",            // red-entry (subnet, not a host)
      "ssh svc@site-web",                    // site-web
      "cat /etc/passwd",                     // site-web
      "ping -c1 10.1.1.14",                  // site-proxy
      "ls /opt",                             // site-proxy
      "scp notes.txt it-ubuntu-1:/tmp",      // it-ubuntu-1
      "curl http://10.1.1.20/ site-file",    // admin-console (leftmost mention)
      "hydra -l root ssh://10.1.1.150",      // admin-console (no exact match)
      "ssh root@fin-gw.",                    // fin-gw
  };
  const std::vector<HostId> expected{"red-entry", "red-entry",     "site-web",      "site-web",      "site-proxy",
                                     "site-proxy", "it-ubuntu-1", "admin-console", "admin-console", "fin-gw"};
  std::vector<HostId> got;
  for (const auto& [cmd, host] : attribute_commands(fixture, table, s.entry_host)) got.push_back(host);
  const bool fixture_ok = got == expected;

  RngStream rng(505);
  int mismatches = 0;
  for (int rep = 0; rep < tol::kRandomLogs; ++rep) {
    const auto log = random_log(s, rng, tol::kLogLength);
    std::vector<HostId> lib;
    for (const auto& [cmd, host] : attribute_commands(log, table, s.entry_host)) lib.push_back(host);
    mismatches += lib != reference_attribution(log, table, s.entry_host);
  }
  return {fixture_ok && mismatches == 0,
          fmt("fixture %s, %d / %d random logs differ from the reference", fixture_ok ? "exact" : "wrong",
              mismatches, tol::kRandomLogs)};
}

Outcome identifiability() {
  ExperimentConfig cfg = load_experiment_config_file(kData + "/experiments/identifiability.json");
  cfg.output_dir = kTmp + "/acceptance/identifiability";
  const auto t0 = Clock::now();
  const ExperimentReport r = run_batch(cfg);
  const AccuracyResult acc = evaluate_sensor_accuracy(r);
  const double secs = seconds_since(t0);
  bool diag = true;
  std::string rows;
  for (std::size_t t = 0; t < kBiasCount; ++t) {
    for (std::size_t i = 0; i < kBiasCount; ++i)
      if (i != t && acc.matrix[t][i] >= acc.matrix[t][t]) diag = false;
    rows += fmt(" [%d %d %d %d %d]", acc.matrix[t][0], acc.matrix[t][1], acc.matrix[t][2], acc.matrix[t][3],
                acc.matrix[t][4]);
  }
  return {acc.accuracy >= tol::kMinAccuracy && diag && secs < tol::kIdentifiabilitySeconds,
          fmt("accuracy %.3f over %d sessions, diagonal row max %s, %.1f s, matrix%s", acc.accuracy, acc.eligible,
              diag ? "yes" : "no", secs, rows.c_str())};
}

Outcome directional() {
  ExperimentConfig cfg = load_experiment_config_file(kData + "/experiments/mixed_cohort.json");
  cfg.output_dir = kTmp + "/acceptance/mixed_cohort";
  const ExperimentReport r = run_batch(cfg);
  std::map<Condition, std::vector<double>> on_path, rank, alerts;
  for (const auto& s : r.sessions) {
    if (!s.summary.error.empty()) continue;
    const Condition c = s.summary.condition;
    on_path[c].push_back(s.summary.on_path_proportion);
    rank[c].push_back(s.summary.progress_rank);
    const auto it = s.summary.alert_counts.find(kFocusHost);
    alerts[c].push_back(it == s.summary.alert_counts.end() ? 0.0 : it->second);
  }
  const auto T = Condition::Trigger, C = Condition::Control;
  const bool a = mean(on_path[C]) > mean(on_path[T]);
  const bool b = median(rank[C]) >= median(rank[T]);
  const bool c = mean(alerts[T]) > mean(alerts[C]);
  return {a && b && c && on_path[T].size() == 20 && on_path[C].size() == 20,
          fmt("n=%zu/%zu; (a) on-path control %.3f vs trigger %.3f %s; (b) median rank control %.1f vs trigger "
              "%.1f %s; (c) %s alerts trigger %.2f vs control %.2f %s",
              on_path[T].size(), on_path[C].size(), mean(on_path[C]), mean(on_path[T]), a ? "ok" : "WRONG",
              median(rank[C]), median(rank[T]), b ? "ok" : "WRONG", kFocusHost, mean(alerts[T]), mean(alerts[C]),
              c ? "ok" : "WRONG")};
}

// Two-sided permutation p by full enumeration of group assignments.
double permutation_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), na = a.size();
  auto u_of = [&](const std::vector<bool>& in_a) {
    double u = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (in_a[i])
        for (std::size_t j = 0; j < n; ++j)
          if (!in_a[j]) u += pooled[i] > pooled[j] ? 1.0 : (pooled[i] == pooled[j] ? 0.5 : 0.0);
    return u;
  };
  std::vector<bool> obs(n, false);
  std::fill(obs.begin(), obs.begin() + na, true);
  const double mid = na * (n - na) / 2.0;
  const double dev = std::abs(u_of(obs) - mid);
  std::vector<bool> sel(n, false);
  std::fill(sel.end() - na, sel.end(), true);
  long total = 0, extreme = 0;
  do {
    ++total;
    extreme += std::abs(u_of(sel) - mid) >= dev - 1e-9;
  } while (std::next_permutation(sel.begin(), sel.end()));
  return static_cast<double>(extreme) / total;
}

Outcome statistics() {
  const double p13 = mann_whitney_u({1, 2}, {3, 4}).p;
  const double h = kruskal_wallis({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}).statistic;
  RngStream rng(808);
  double worst = 0, worst_normal = 0;
  for (int t = 0; t < tol::kApproxTrials; ++t) {
    std::vector<double> a, b;
    const std::size_t na = 2 + rng.below(7), nb = 2 + rng.below(7);
    for (std::size_t i = 0; i < na; ++i) a.push_back(std::floor(rng.uniform() * 12));
    for (std::size_t i = 0; i < nb; ++i) b.push_back(std::floor(rng.uniform() * 12) + 2);
    const double perm = permutation_p(a, b);
    worst = std::max(worst, std::abs(mann_whitney_u(a, b).p - perm));
    worst_normal = std::max(worst_normal, std::abs(mann_whitney_normal(a, b).p - perm));
  }
  const bool ok = std::abs(p13 - 1.0 / 3.0) < tol::kOracle && std::abs(h - 7.2) < tol::kOracle && worst < tol::kApproxGap;
  return {ok, fmt("MW p %.6f, KW H %.6f, reported p vs permutation max gap %.2e over %d trials "
                  "(forced normal approximation max gap %.4f)",
                  p13, h, worst, tol::kApproxTrials, worst_normal)};
}

Outcome determinism() {
  ExperimentConfig cfg = load_experiment_config_file(kData + "/experiments/smoke.json");
  const fs::path a = kTmp + "/acceptance/det_a", b = kTmp + "/acceptance/det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  cfg.output_dir = a.string();
  run_batch(cfg);
  cfg.output_dir = b.string();
  run_batch(cfg);
  std::vector<std::string> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a).string());
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b).string());
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  int differing = 0;
  if (fa == fb)
    for (const auto& f : fa) differing += slurp(a / f) != slurp(b / f);
  return {fa == fb && differing == 0 && !fa.empty(),
          fmt("%zu files, layouts %s, %d differ", fa.size(), fa == fb ? "equal" : "differ", differing)};
}

Outcome trigger_grammar() {
  struct Case {
    const char* id;
    TriggerId want;
  };
  const Case cases[] = {{"B.2.1.1", {BiasKind::BaseRateNeglect, 2, {1, 1}}},
                        {"L.12.1", {BiasKind::LossAversion, 12, {1}}},
                        {"S.9.4", {BiasKind::SunkCost, 9, {4}}},
                        {"C.7.1.1", {BiasKind::Confirmation, 7, {1, 1}}},
                        {"A.3.1.1", {BiasKind::Availability, 3, {1, 1}}}};
  int good = 0;
  for (const auto& c : cases) good += parse_trigger_id(c.id) == c.want;

  const std::regex valid(R"(^[BLACS]\.(0|[1-9][0-9]{0,8})(\.(0|[1-9][0-9]{0,8}))*$)");
  const std::string alphabet = "BLACSXZbl0123456789..-+ _";
  RngStream rng(1010);
  int generated = 0, accepted = 0;
  while (generated < tol::kFuzzedIds) {
    std::string id;
    if (rng.bernoulli(0.5)) {
      // Mutate a valid id.
      id = cases[rng.below(5)].id;
      const std::size_t pos = rng.below(id.size() + 1);
      switch (rng.below(3)) {
        case 0: id.insert(pos, 1, alphabet[rng.below(alphabet.size())]); break;
        case 1: if (pos < id.size()) id.erase(pos, 1); break;
        default: if (pos < id.size()) id[pos] = alphabet[rng.below(alphabet.size())]; break;
      }
    } else {
      for (std::size_t i = 0, n = rng.below(10); i < n; ++i) id += alphabet[rng.below(alphabet.size())];
    }
    if (std::regex_match(id, valid)) continue;
    ++generated;
    try {
      parse_trigger_id(id);
      ++accepted;
    } catch (const Error&) {
    }
  }
  return {good == 5 && accepted == 0,
          fmt("%d / 5 documented ids parse, %d / %d malformed ids accepted", good, accepted, tol::kFuzzedIds)};
}

}  // namespace

int main() {
  fs::create_directories(kTmp + "/acceptance");
  report("AC1", "belief bounds", belief_bounds);
  report("AC2", "updater arithmetic", updater_oracles);
  report("AC3", "sunk-cost rule", sunk_cost_rule);
  report("AC4", "on-path proportion", on_path_oracle);
  report("AC5", "command attribution", attribution_oracle);
  report("AC6", "sensor identifiability", identifiability);
  report("AC7", "directional replication", directional);
  report("AC8", "rank statistics", statistics);
  report("AC9", "batch determinism", determinism);
  report("AC10", "trigger id grammar", trigger_grammar);
  std::printf("%s: %d failing\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
