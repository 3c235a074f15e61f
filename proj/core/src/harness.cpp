#include "cogsim/harness.hpp"

#include <filesystem>
#include <fstream>

#include "cogsim/error.hpp"
#include "cogsim/rng.hpp"
#include "cogsim/session.hpp"
#include "json_util.hpp"

namespace cogsim {

namespace fs = std::filesystem;
using detail::json;
using ojson = nlohmann::ordered_json;

namespace {

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

BiasProfile profile_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) detail::config_error(path, "expected object");
  if (j.contains("archetype")) {
    const std::string name = detail::get_string(j, "archetype", path);
    auto b = bias_from_string(name);
    if (!b) detail::config_error(path + ".archetype", "unknown bias \"" + name + "\"");
    BiasProfile p = archetype_profile(*b, detail::get_number_or(j, "high", 0.9, path),
                                      detail::get_number_or(j, "low", 0.1, path));
    p.lambda_sunk = detail::get_number_or(j, "lambda_sunk", p.lambda_sunk, path);
    p.recency_weight = detail::get_number_or(j, "recency_weight", p.recency_weight, path);
    p.prior_stickiness = detail::get_number_or(j, "prior_stickiness", p.prior_stickiness, path);
    p.salience_gain = detail::get_number_or(j, "salience_gain", p.salience_gain, path);
    p.loss_gain = detail::get_number_or(j, "loss_gain", p.loss_gain, path);
    try {
      check_profile(p);
    } catch (const Error& e) {
      detail::config_error(path, e.what());
    }
    return p;
  }
  BiasProfile p;
  const json& sus = detail::require(j, "susceptibility", path);
  for (BiasKind k : kAllBiases) {
    p.susceptibility[k] = detail::get_number_or(sus, std::string(to_string(k)).c_str(), 0.0,
                                                path + ".susceptibility");
  }
  p.lambda_sunk = detail::get_number_or(j, "lambda_sunk", 0.0, path);
  p.recency_weight = detail::get_number_or(j, "recency_weight", 0.0, path);
  p.prior_stickiness = detail::get_number_or(j, "prior_stickiness", 0.0, path);
  p.salience_gain = detail::get_number_or(j, "salience_gain", 0.0, path);
  p.loss_gain = detail::get_number_or(j, "loss_gain", 0.0, path);
  try {
    check_profile(p);
  } catch (const Error& e) {
    detail::config_error(path, e.what());
  }
  return p;
}

ojson profile_to_json(const BiasProfile& p) {
  ojson sus;
  for (BiasKind k : kAllBiases) sus[std::string(to_string(k))] = p.susceptibility[k];
  return ojson{{"susceptibility", sus},
               {"lambda_sunk", p.lambda_sunk},
               {"recency_weight", p.recency_weight},
               {"prior_stickiness", p.prior_stickiness},
               {"salience_gain", p.salience_gain},
               {"loss_gain", p.loss_gain}};
}

Division division_from(const std::string& s, const std::string& path) {
  if (s == "open") return Division::Open;
  if (s == "expert") return Division::Expert;
  detail::config_error(path, "expected \"open\" or \"expert\"");
}

Condition condition_from(const std::string& s, const std::string& path) {
  if (s == "trigger") return Condition::Trigger;
  if (s == "control") return Condition::Control;
  detail::config_error(path, "expected \"trigger\" or \"control\"");
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ConfigError, p.string() + ": cannot write");
  out << content;
}

}  // namespace

ExperimentConfig load_experiment_config(std::string_view json_text, const std::string& base_dir) {
  const json j = detail::parse_json(json_text, "experiment");
  const std::string path = "experiment";
  ExperimentConfig c;
  c.scenario_path = resolve(base_dir, detail::get_string(j, "scenario_path", path));
  if (j.contains("sensor_config_path")) {
    c.sensor_config_path = resolve(base_dir, detail::get_string(j, "sensor_config_path", path));
  }
  if (j.contains("rule_table_path")) {
    c.rule_table_path = resolve(base_dir, detail::get_string(j, "rule_table_path", path));
  }
  if (j.contains("ekm_rules_path")) {
    c.ekm_rules_path = resolve(base_dir, detail::get_string(j, "ekm_rules_path", path));
  }
  c.output_dir = resolve(base_dir, detail::get_string(j, "output_dir", path));
  const json& seed = detail::require(j, "seed", path);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    detail::config_error(path + ".seed", "expected unsigned integer");
  }
  c.seed = seed.get<std::uint64_t>();
  if (j.contains("n_sessions_per_condition")) {
    c.n_sessions_per_condition =
        static_cast<int>(detail::get_int(j, "n_sessions_per_condition", path));
    if (c.n_sessions_per_condition < 1) {
      detail::config_error(path + ".n_sessions_per_condition", "must be >= 1");
    }
  }
  if (j.contains("conditions")) {
    c.conditions.clear();
    const auto names = detail::get_strings(j, "conditions", path);
    for (std::size_t i = 0; i < names.size(); ++i) {
      c.conditions.push_back(
          condition_from(names[i], path + ".conditions[" + std::to_string(i) + "]"));
    }
    if (c.conditions.empty()) detail::config_error(path + ".conditions", "empty");
  }
  const json& cohort = detail::get_array(j, "bias_cohort", path);
  if (cohort.empty()) detail::config_error(path + ".bias_cohort", "empty");
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const std::string p = path + ".bias_cohort[" + std::to_string(i) + "]";
    CohortEntry e;
    e.profile = profile_from_json(detail::require(cohort[i], "profile", p), p + ".profile");
    e.count = static_cast<int>(detail::get_int(cohort[i], "count", p));
    if (e.count < 1) detail::config_error(p + ".count", "must be >= 1");
    if (cohort[i].contains("division")) {
      e.division = division_from(detail::get_string(cohort[i], "division", p), p + ".division");
    }
    c.bias_cohort.push_back(e);
  }
  c.max_steps = static_cast<int>(detail::get_number_or(j, "max_steps", c.max_steps, path));
  c.gap_threshold = detail::get_number_or(j, "gap_threshold", c.gap_threshold, path);
  c.risk_horizon = detail::get_number_or(j, "risk_horizon", c.risk_horizon, path);
  if (c.max_steps < 1) detail::config_error(path + ".max_steps", "must be >= 1");
  if (!(c.gap_threshold > 0.0)) detail::config_error(path + ".gap_threshold", "must be > 0");
  return c;
}

ExperimentConfig load_experiment_config_file(const std::string& path) {
  const std::string base = fs::path(path).parent_path().string();
  return load_experiment_config(detail::read_file(path), base.empty() ? "." : base);
}

// ---------------------------------------------------------------------------

SessionAnalysis analyze_session(const std::vector<EventRecord>& events, const Scenario& scenario,
                                const AnalysisOptions& opts) {
  SessionAnalysis a;
  a.signals = map_events(events, opts.rules);
  const std::vector<std::string> commands = command_lines(events);
  a.attributed = attribute_commands(commands, host_table_for(scenario), scenario.entry_host);
  a.progress_rank = progress_rank(a.attributed, scenario, a.signals);
  a.on_path_proportion = on_path_proportion(a.attributed, scenario);
  a.alert_counts = alert_counts_by_host(events);
  for (const auto& t : scenario.triggers) {
    a.trigger_times[t.trigger_id] = trigger_interaction_time(events, t, opts.gap_threshold);
  }
  for (const auto& r : opts.ekm_rules) a.ekm_counts.push_back(apply_ekm(events, r));
  a.risk_tolerance = risk_tolerance_score(events, opts.risk_horizon);
  a.cognitive_reflection = cognitive_reflection_score(commands);
  return a;
}

namespace {

ojson ekm_to_json(const std::vector<EkmCounts>& counts) {
  ojson arr = ojson::array();
  for (const auto& c : counts) {
    arr.push_back({{"trigger_id", c.trigger_id},
                   {"biased", c.biased_count},
                   {"rational", c.rational_count}});
  }
  return arr;
}

ojson alerts_to_json(const std::map<HostId, int>& m) {
  ojson o = ojson::object();
  for (const auto& [k, v] : m) o[k] = v;
  return o;
}

ojson times_to_json(const std::map<std::string, double>& m) {
  ojson o = ojson::object();
  for (const auto& [k, v] : m) o[k] = v;
  return o;
}

}  // namespace

std::string analysis_to_json(const SessionAnalysis& a) {
  ojson j;
  j["signals"] = a.signals.size();
  j["commands"] = a.attributed.size();
  j["progress_rank"] = a.progress_rank;
  j["on_path_proportion"] = a.on_path_proportion;
  j["alert_counts"] = alerts_to_json(a.alert_counts);
  j["trigger_times"] = times_to_json(a.trigger_times);
  j["ekm_counts"] = ekm_to_json(a.ekm_counts);
  j["risk_tolerance"] = a.risk_tolerance;
  j["cognitive_reflection"] = a.cognitive_reflection;
  ojson attributed = ojson::array();
  for (const auto& [cmd, host] : a.attributed) attributed.push_back({{"command", cmd}, {"host", host}});
  j["attributed"] = attributed;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

ExperimentReport run_batch(const ExperimentConfig& cfg) {
  const Scenario scenario = load_scenario_file(cfg.scenario_path);
  const SensorConfig sensor = cfg.sensor_config_path.empty()
                                  ? default_sensor_config()
                                  : load_sensor_config_file(cfg.sensor_config_path);
  AnalysisOptions aopts;
  if (!cfg.rule_table_path.empty()) aopts.rules = load_rule_table_file(cfg.rule_table_path);
  if (!cfg.ekm_rules_path.empty()) aopts.ekm_rules = load_ekm_rules_file(cfg.ekm_rules_path);
  aopts.gap_threshold = cfg.gap_threshold;
  aopts.risk_horizon = cfg.risk_horizon;

  std::vector<const CohortEntry*> members;
  for (const auto& e : cfg.bias_cohort) {
    for (int i = 0; i < e.count; ++i) members.push_back(&e);
  }
  const std::size_t per_condition =
      cfg.n_sessions_per_condition > 0 ? static_cast<std::size_t>(cfg.n_sessions_per_condition)
                                       : members.size();

  const Scenario control = without_triggers(scenario);
  ExperimentReport report;
  report.scenario_path = cfg.scenario_path;
  report.seed = cfg.seed;
  const fs::path out_dir(cfg.output_dir);

  std::uint64_t index = 0;
  for (Condition cond : cfg.conditions) {
    const Scenario& sc = cond == Condition::Trigger ? scenario : control;
    for (std::size_t i = 0; i < per_condition; ++i, ++index) {
      const CohortEntry& member = *members[i % members.size()];
      char id[32];
      std::snprintf(id, sizeof id, "%s-%04zu", cond == Condition::Trigger ? "T" : "C", i);

      SessionResult r;
      r.summary.session_id = id;
      r.summary.condition = cond;
      r.summary.division = member.division;
      r.seed = derive_seed(cfg.seed, index);
      r.profile = member.profile;
      r.dominant = dominant_bias(member.profile);
      for (const auto& t : scenario.triggers) r.summary.trigger_times[t.trigger_id] = 0.0;

      const fs::path sdir = out_dir / "sessions" / id;
      try {
        SessionParams params;
        params.max_steps = cfg.max_steps;
        params.actor = id;
        const SessionTrace trace = simulate_session(sc, member.profile, r.seed, params);
        write_file(sdir / "events.jsonl", write_event_log(trace.events));

        const SessionAnalysis a = analyze_session(trace.events, sc, aopts);
        SensorScenario env{&sc, &trace.events, params.agent};
        const std::vector<BeliefState> traj = run_sensor(a.signals, env, sensor);
        write_file(sdir / "beliefs.csv", trajectory_csv(traj));

        r.final_beliefs = normalize_beliefs(traj.back());
        r.inferred = argmax_bias(r.final_beliefs);
        r.summary.progress_rank = a.progress_rank;
        r.summary.on_path_proportion = a.on_path_proportion;
        r.summary.alert_counts = a.alert_counts;
        if (cond == Condition::Trigger) r.summary.trigger_times = a.trigger_times;
        r.summary.ekm_counts = a.ekm_counts;
        r.risk_tolerance = a.risk_tolerance;
        r.cognitive_reflection = a.cognitive_reflection;
      } catch (const std::exception& e) {
        r.summary.error = e.what();
        r.inferred.reset();
      }
      report.sessions.push_back(std::move(r));
    }
  }

  write_file(out_dir / "report.json", report_to_json(report));
  std::vector<SessionSummary> rows;
  for (const auto& s : report.sessions) rows.push_back(s.summary);
  write_file(out_dir / "summary.csv", session_summary_csv(rows));
  return report;
}

// ---------------------------------------------------------------------------
// Report serialization

namespace {

struct GroupStats {
  std::vector<double> on_path;
  std::vector<double> rank;
  std::vector<double> focus_alerts;
};

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  ojson root;
  root["seed"] = report.seed;
  root["seed_derivation"] = "session_seed = splitmix64(seed ^ splitmix64(session_index))";
  root["scenario_path"] = report.scenario_path;

  ojson sessions = ojson::array();
  std::map<Condition, GroupStats> groups;
  for (const auto& s : report.sessions) {
    ojson j;
    j["session_id"] = s.summary.session_id;
    j["condition"] = to_string(s.summary.condition);
    j["division"] = to_string(s.summary.division);
    j["seed"] = s.seed;
    j["profile"] = profile_to_json(s.profile);
    j["dominant_bias"] = s.dominant ? ojson(to_string(*s.dominant)) : ojson(nullptr);
    j["inferred_bias"] = s.inferred ? ojson(to_string(*s.inferred)) : ojson(nullptr);
    ojson beliefs;
    for (BiasKind k : kAllBiases) beliefs[std::string(to_string(k))] = s.final_beliefs[k];
    j["final_beliefs"] = beliefs;
    j["progress_rank"] = s.summary.progress_rank;
    j["on_path_proportion"] = s.summary.on_path_proportion;
    j["alert_counts"] = alerts_to_json(s.summary.alert_counts);
    j["trigger_times"] = times_to_json(s.summary.trigger_times);
    j["ekm_counts"] = ekm_to_json(s.summary.ekm_counts);
    j["risk_tolerance"] = s.risk_tolerance;
    j["cognitive_reflection"] = s.cognitive_reflection;
    j["error"] = s.summary.error.empty() ? ojson(nullptr) : ojson(s.summary.error);
    sessions.push_back(std::move(j));

    if (!s.summary.error.empty()) continue;
    GroupStats& g = groups[s.summary.condition];
    g.on_path.push_back(s.summary.on_path_proportion);
    g.rank.push_back(s.summary.progress_rank);
    int focus = 0;
    for (const auto& [h, n] : s.summary.alert_counts) {
      if (h == kFocusHost) focus = n;
    }
    g.focus_alerts.push_back(focus);
  }
  root["sessions"] = sessions;

  ojson agg = ojson::object();
  for (const auto& [cond, g] : groups) {
    agg[std::string(to_string(cond))] = {{"n", g.on_path.size()},
                                         {"mean_on_path_proportion", mean(g.on_path)},
                                         {"median_progress_rank", median(g.rank)},
                                         {std::string("mean_alerts_") + kFocusHost, mean(g.focus_alerts)}};
  }
  root["aggregates"] = agg;

  ojson tests = ojson::object();
  if (groups.count(Condition::Trigger) && groups.count(Condition::Control)) {
    const GroupStats& t = groups[Condition::Trigger];
    const GroupStats& c = groups[Condition::Control];
    const TestResult mw = mann_whitney_u(c.on_path, t.on_path);
    tests["on_path_mann_whitney"] = {{"U", mw.statistic}, {"p", mw.p}, {"exact", mw.exact}};
    const TestResult kw = kruskal_wallis({c.rank, t.rank});
    tests["progress_kruskal_wallis"] = {{"H", kw.statistic}, {"p", kw.p}};
    if (t.focus_alerts.size() >= 2 && c.focus_alerts.size() >= 2) {
      tests["alerts_welch_t"] = welch_t(t.focus_alerts, c.focus_alerts);
    }
  }
  root["tests"] = tests;

  AccuracyResult acc;
  try {
    acc = evaluate_sensor_accuracy(report);
    root["sensor_accuracy"] = acc.accuracy;
  } catch (const Error&) {
    root["sensor_accuracy"] = nullptr;
  }
  ojson matrix = ojson::array();
  for (const auto& row : acc.matrix) matrix.push_back(row);
  root["confusion_matrix"] = matrix;
  ojson labels = ojson::array();
  for (BiasKind k : kAllBiases) labels.push_back(to_string(k));
  root["confusion_labels"] = labels;
  return root.dump(2) + "\n";
}

ExperimentReport load_report(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "report");
  ExperimentReport r;
  r.scenario_path = detail::get_string(root, "scenario_path", "report");
  r.seed = detail::require(root, "seed", "report").get<std::uint64_t>();
  const json& sessions = detail::get_array(root, "sessions", "report");
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const std::string path = "report.sessions[" + std::to_string(i) + "]";
    const json& j = sessions[i];
    SessionResult s;
    s.summary.session_id = detail::get_string(j, "session_id", path);
    s.summary.condition = condition_from(detail::get_string(j, "condition", path), path + ".condition");
    s.summary.division = division_from(detail::get_string(j, "division", path), path + ".division");
    s.seed = detail::require(j, "seed", path).get<std::uint64_t>();
    s.profile = profile_from_json(detail::require(j, "profile", path), path + ".profile");
    s.dominant = dominant_bias(s.profile);
    if (const json& inf = detail::require(j, "inferred_bias", path); !inf.is_null()) {
      s.inferred = bias_from_string(inf.get<std::string>());
      if (!s.inferred) detail::config_error(path + ".inferred_bias", "unknown bias");
    }
    const json& beliefs = detail::require(j, "final_beliefs", path);
    for (BiasKind k : kAllBiases) {
      s.final_beliefs[k] = detail::get_number(beliefs, std::string(to_string(k)).c_str(),
                                              path + ".final_beliefs");
    }
    s.summary.progress_rank = static_cast<int>(detail::get_int(j, "progress_rank", path));
    s.summary.on_path_proportion = detail::get_number(j, "on_path_proportion", path);
    for (const auto& [h, n] : detail::require(j, "alert_counts", path).items()) {
      s.summary.alert_counts[h] = n.get<int>();
    }
    for (const auto& [t, v] : detail::require(j, "trigger_times", path).items()) {
      s.summary.trigger_times[t] = v.get<double>();
    }
    for (const auto& c : detail::get_array(j, "ekm_counts", path)) {
      EkmCounts e;
      e.trigger_id = c.at("trigger_id").get<std::string>();
      e.biased_count = c.at("biased").get<int>();
      e.rational_count = c.at("rational").get<int>();
      s.summary.ekm_counts.push_back(e);
    }
    s.risk_tolerance = detail::get_number_or(j, "risk_tolerance", 0.0, path);
    s.cognitive_reflection = detail::get_number_or(j, "cognitive_reflection", 0.0, path);
    if (const json& err = detail::require(j, "error", path); !err.is_null()) {
      s.summary.error = err.get<std::string>();
    }
    r.sessions.push_back(std::move(s));
  }
  return r;
}

ExperimentReport load_report_file(const std::string& path) {
  return load_report(detail::read_file(path));
}

AccuracyResult evaluate_sensor_accuracy(const ExperimentReport& report) {
  AccuracyResult r;
  int correct = 0;
  for (const auto& s : report.sessions) {
    if (!s.dominant || !s.inferred || !s.summary.error.empty()) continue;
    ++r.eligible;
    ++r.matrix[index_of(*s.dominant)][index_of(*s.inferred)];
    if (*s.dominant == *s.inferred) ++correct;
  }
  if (r.eligible == 0) throw Error(ErrorCode::NoGroundTruth, "no session has a unique dominant bias");
  r.accuracy = static_cast<double>(correct) / r.eligible;
  return r;
}

std::string accuracy_to_json(const AccuracyResult& r) {
  ojson j;
  j["accuracy"] = r.accuracy;
  j["eligible_sessions"] = r.eligible;
  ojson per = ojson::object();
  ojson matrix = ojson::array();
  for (BiasKind k : kAllBiases) {
    const auto& row = r.matrix[index_of(k)];
    int total = 0;
    for (int v : row) total += v;
    per[std::string(to_string(k))] = {
        {"sessions", total},
        {"recall", total ? static_cast<double>(row[index_of(k)]) / total : 0.0}};
    matrix.push_back(row);
  }
  j["per_bias"] = per;
  j["confusion_matrix"] = matrix;
  return j.dump(2) + "\n";
}

BiasVector pooled_beliefs(const ExperimentReport& report) {
  BiasVector sum{};
  for (const auto& s : report.sessions) {
    if (!s.summary.error.empty()) continue;
    for (BiasKind k : kAllBiases) sum[k] += s.final_beliefs[k];
  }
  double total = 0.0;
  for (BiasKind k : kAllBiases) total += sum[k];
  BiasVector out{};
  for (BiasKind k : kAllBiases) out[k] = total > 0.0 ? sum[k] / total : 0.2;
  return out;
}

}  // namespace cogsim
