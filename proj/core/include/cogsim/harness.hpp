#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/cogvuln_sensor.hpp"
#include "cogsim/mats_mapper.hpp"
#include "cogsim/metrics_stats.hpp"
#include "cogsim/range_model.hpp"
#include "cogsim/rule_sensors.hpp"

namespace cogsim {

struct CohortEntry {
  BiasProfile profile;
  int count = 1;
  Division division = Division::Open;
};

struct ExperimentConfig {
  std::string scenario_path;
  std::string sensor_config_path;  // empty: built-in defaults
  std::string rule_table_path;     // empty: built-in defaults
  std::string ekm_rules_path;      // empty: built-in B.2.1.1 and L.12.1 rules
  int n_sessions_per_condition = 0;  // 0: one session per cohort member
  std::vector<Condition> conditions{Condition::Trigger, Condition::Control};
  std::vector<CohortEntry> bias_cohort;
  std::uint64_t seed = 0;
  std::string output_dir;
  int max_steps = 400;
  double gap_threshold = 5.0;
  double risk_horizon = 60.0;
};

// Relative paths inside the document resolve against base_dir.
ExperimentConfig load_experiment_config(std::string_view json_text, const std::string& base_dir = ".");
ExperimentConfig load_experiment_config_file(const std::string& path);

// Everything derived from one event stream.
struct SessionAnalysis {
  std::vector<TechniqueSignal> signals;
  Attributed attributed;
  int progress_rank = 1;
  double on_path_proportion = 0.0;
  std::map<HostId, int> alert_counts;
  std::map<std::string, double> trigger_times;
  std::vector<EkmCounts> ekm_counts;
  double risk_tolerance = 0.0;
  double cognitive_reflection = 0.0;
};

struct AnalysisOptions {
  RuleTable rules = default_rule_table();
  std::vector<EkmRule> ekm_rules{ekm_b211_rule(), ekm_l121_rule()};
  double gap_threshold = 5.0;
  double risk_horizon = 60.0;
};

SessionAnalysis analyze_session(const std::vector<EventRecord>& events, const Scenario& scenario,
                                const AnalysisOptions& opts = {});
std::string analysis_to_json(const SessionAnalysis& a);

struct SessionResult {
  SessionSummary summary;
  std::uint64_t seed = 0;
  BiasProfile profile;
  std::optional<BiasKind> dominant;
  std::optional<BiasKind> inferred;
  BiasVector final_beliefs{};  // normalized
  double risk_tolerance = 0.0;
  double cognitive_reflection = 0.0;
};

// Host whose alert volume the report compares across conditions.
inline constexpr const char* kFocusHost = "it-ubuntu-1";

using ConfusionMatrix = std::array<std::array<int, 5>, 5>;  // [truth][inferred]

struct ExperimentReport {
  std::vector<SessionResult> sessions;
  std::string scenario_path;
  std::uint64_t seed = 0;
};

// Simulates every session, writes the output layout under cfg.output_dir and
// returns the report. Session errors are recorded, never rethrown.
ExperimentReport run_batch(const ExperimentConfig& cfg);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport load_report(std::string_view json_text);
ExperimentReport load_report_file(const std::string& path);

struct AccuracyResult {
  double accuracy = 0.0;
  int eligible = 0;
  ConfusionMatrix matrix{};
};

// Over sessions with a unique dominant susceptibility and no error; throws
// NoGroundTruth when none qualify.
AccuracyResult evaluate_sensor_accuracy(const ExperimentReport& report);
std::string accuracy_to_json(const AccuracyResult& r);

// Mean of the final normalized beliefs of error-free sessions, renormalized.
BiasVector pooled_beliefs(const ExperimentReport& report);

}  // namespace cogsim
