#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cogsim/cogvuln_sensor.hpp"
#include "cogsim/error.hpp"
#include "cogsim/harness.hpp"
#include "cogsim/tom_defender.hpp"

using namespace cogsim;

namespace {

std::string slurp(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Error(ErrorCode::ConfigError, path + ": cannot open file");
  std::string out;
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

std::vector<EventRecord> read_events(const std::string& path) {
  EventLog log = parse_event_log(slurp(path));
  for (const auto& w : log.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(log.events);
}

int cmd_run(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config_file(config_path);
  const ExperimentReport report = run_batch(cfg);
  int failed = 0;
  for (const auto& s : report.sessions) failed += s.summary.error.empty() ? 0 : 1;
  std::cout << "sessions: " << report.sessions.size() << " (failed " << failed << ")\n"
            << "output: " << cfg.output_dir << '\n';
  try {
    const AccuracyResult acc = evaluate_sensor_accuracy(report);
    std::cout << "sensor accuracy: " << acc.accuracy << " over " << acc.eligible << " sessions\n";
  } catch (const Error&) {
    std::cout << "sensor accuracy: n/a (no ground truth)\n";
  }
  return 0;
}

int cmd_analyze(const std::string& events_path, const std::string& scenario_path,
                const std::string& rules_path) {
  const Scenario sc = load_scenario_file(scenario_path);
  AnalysisOptions opts;
  if (!rules_path.empty()) opts.rules = load_rule_table_file(rules_path);
  std::cout << analysis_to_json(analyze_session(read_events(events_path), sc, opts));
  return 0;
}

int cmd_sense(const std::string& events_path, const std::string& config_path,
              const std::string& scenario_path, const std::string& rules_path) {
  const SensorConfig cfg = load_sensor_config_file(config_path);
  const Scenario sc = load_scenario_file(scenario_path);
  const RuleTable rules = rules_path.empty() ? default_rule_table() : load_rule_table_file(rules_path);
  const std::vector<EventRecord> events = read_events(events_path);
  const auto signals = map_events(events, rules);
  SensorScenario env{&sc, &events, default_agent_config()};
  std::cout << trajectory_csv(run_sensor(signals, env, cfg));
  return 0;
}

int cmd_evaluate(const std::string& report_path) {
  std::cout << accuracy_to_json(evaluate_sensor_accuracy(load_report_file(report_path)));
  return 0;
}

struct RecommendArgs {
  std::string report;
  std::string candidates;
  std::string scenario;
  double w_time = 1.0;
  double w_alert = 1.0;
  int horizon = 120;
  int samples = 8;
  std::uint64_t seed = 1;
};

int cmd_recommend(const RecommendArgs& a) {
  const ExperimentReport report = load_report_file(a.report);
  const Scenario sc = load_scenario_file(a.scenario.empty() ? report.scenario_path : a.scenario);
  const auto candidates = load_triggers(slurp(a.candidates));
  const auto hyps = hypotheses_from_beliefs(pooled_beliefs(report));
  const auto recs =
      recommend_trigger(sc, hyps, candidates, {a.w_time, a.w_alert}, a.horizon, a.samples, a.seed);
  std::cout << recommendations_to_json(recs, hyps);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cogsim: cognitive-bias attack simulation and sensing"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "simulate a trigger/control experiment batch");
  run->add_option("config", config_path, "experiment config (JSON)")->required();

  std::string events_path;
  std::string scenario_path = COGSIM_DEFAULT_SCENARIO;
  std::string rules_path;
  auto* analyze = app.add_subcommand("analyze", "behavioral metrics for one event log");
  analyze->add_option("events", events_path, "events.jsonl")->required();
  analyze->add_option("--scenario", scenario_path, "scenario config")->required();
  analyze->add_option("--rules", rules_path, "technique mapping rule table");

  std::string sensor_path;
  auto* sense = app.add_subcommand("sense", "belief trajectory for one event log");
  sense->add_option("events", events_path, "events.jsonl")->required();
  sense->add_option("--config", sensor_path, "sensor config")->required();
  sense->add_option("--scenario", scenario_path, "scenario config");
  sense->add_option("--rules", rules_path, "technique mapping rule table");

  std::string report_path;
  auto* evaluate = app.add_subcommand("evaluate", "sensor accuracy against ground truth");
  evaluate->add_option("report", report_path, "report.json")->required();

  RecommendArgs rec;
  auto* recommend = app.add_subcommand("recommend", "rank candidate triggers");
  recommend->add_option("report", rec.report, "report.json")->required();
  recommend->add_option("--candidates", rec.candidates, "candidate triggers (JSON)")->required();
  recommend->add_option("--scenario", rec.scenario, "scenario (default: the report's)");
  recommend->add_option("--w-time", rec.w_time, "weight on diverted minutes");
  recommend->add_option("--w-alert", rec.w_alert, "weight on extra alerts");
  recommend->add_option("--horizon", rec.horizon, "rollout steps")->check(CLI::PositiveNumber);
  recommend->add_option("--samples", rec.samples, "rollouts per hypothesis")->check(CLI::PositiveNumber);
  recommend->add_option("--seed", rec.seed, "rollout seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*analyze) return cmd_analyze(events_path, scenario_path, rules_path);
    if (*sense) return cmd_sense(events_path, sensor_path, scenario_path, rules_path);
    if (*evaluate) return cmd_evaluate(report_path);
    if (*recommend) return cmd_recommend(rec);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
