#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogsim/mats_mapper.hpp"
#include "cogsim/range_model.hpp"
#include "cogsim/rule_sensors.hpp"
#include "cogsim/telemetry.hpp"

namespace cogsim {

using Attributed = std::vector<std::pair<std::string, HostId>>;

// Deepest attack-path rank reached. Successful lateral-movement signals decide
// when there are any; otherwise every attributed command counts. Never below 1.
int progress_rank(const Attributed& attributed, const Scenario& scenario,
                  const std::vector<TechniqueSignal>& signals = {});

// Share of attributed commands whose host lies on the attack path.
double on_path_proportion(const Attributed& attributed, const Scenario& scenario);

int detectability_count(const std::vector<EventRecord>& events, std::string_view host);

inline constexpr double kInteractionFloorMinutes = 0.5;

// Runs of signature-matching events at the trigger host, split where the gap
// exceeds gap_threshold. Each run contributes its span plus the floor.
double trigger_interaction_time(const std::vector<EventRecord>& events, const TriggerSpec& trigger,
                                double gap_threshold, double floor = kInteractionFloorMinutes);

struct TestResult {
  double statistic = 0.0;
  double p = 1.0;
  bool exact = false;
};

// Midranks (1-based) of the pooled values; ties share the average rank.
std::vector<double> midranks(const std::vector<double>& values);

// U for sample a. Exact two-sided p when min(n) <= 8, else normal approximation.
TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);
// Forced variants, exposed for cross-checking.
TestResult mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b);
TestResult mann_whitney_normal(const std::vector<double>& a, const std::vector<double>& b);

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double dof);

// Welch two-sample t statistic (a minus b); 0 when both variances vanish.
double welch_t(const std::vector<double>& a, const std::vector<double>& b);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);

enum class Condition { Trigger, Control };
enum class Division { Open, Expert };
std::string_view to_string(Condition c);
std::string_view to_string(Division d);

struct SessionSummary {
  std::string session_id;
  Condition condition = Condition::Control;
  Division division = Division::Open;
  int progress_rank = 1;
  double on_path_proportion = 0.0;
  std::map<HostId, int> alert_counts;
  std::map<std::string, double> trigger_times;
  std::vector<EkmCounts> ekm_counts;
  std::string error;  // nonempty when the session failed

  bool operator==(const SessionSummary&) const = default;
};

std::map<HostId, int> alert_counts_by_host(const std::vector<EventRecord>& events);

// One row per session. Map-valued fields are spread over the union of their
// keys so every row has the same columns.
std::string session_summary_csv(const std::vector<SessionSummary>& rows);

}  // namespace cogsim
