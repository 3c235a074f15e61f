#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cogsim/bias.hpp"
#include "cogsim/range_model.hpp"
#include "cogsim/rng.hpp"

namespace cogsim {

// Technique vocabulary shared by the agent, the telemetry generator and the
// default mapping rules.
namespace technique {
inline constexpr const char* kNetworkScan = "discovery/network-service-scan";
inline constexpr const char* kAccountDiscovery = "discovery/account-discovery";
inline constexpr const char* kFileDiscovery = "discovery/file-discovery";
inline constexpr const char* kPermissionCheck = "discovery/permission-groups";
inline constexpr const char* kRemoteServices = "lateral-movement/remote-services";
inline constexpr const char* kBruteForce = "credential-access/brute-force";
inline constexpr const char* kValidAccounts = "privilege-escalation/valid-accounts";
inline constexpr const char* kFoundCredentials = "credential-access/found-credentials";
inline constexpr const char* kExploitPublicApp = "initial-access/exploit-public-facing-app";
inline constexpr const char* kPasswordCracking = "credential-access/password-cracking";
inline constexpr const char* kLocalData = "collection/local-data";
inline constexpr const char* kCreateAccount = "persistence/create-account";
inline constexpr const char* kExfiltration = "exfiltration/exfil-over-web";

std::vector<std::string> all();
// Techniques whose success moves the foothold to the target host.
bool is_lateral(const std::string& technique_id);
}  // namespace technique

struct BiasProfile {
  BiasVector susceptibility{};
  double lambda_sunk = 0.0;
  double recency_weight = 0.0;
  double prior_stickiness = 0.0;
  double salience_gain = 0.0;
  double loss_gain = 0.0;

  bool operator==(const BiasProfile&) const = default;
};

BiasProfile zero_bias_profile();
// Susceptibility `high` for `dominant`, `low` for the rest, unit gains and
// lambda_sunk 0.5 for the sunk-cost archetype (0 otherwise).
BiasProfile archetype_profile(BiasKind dominant, double high = 0.9, double low = 0.1);
// Throws ConfigError when a bound is violated.
void check_profile(const BiasProfile& p);
// Bias with the unique largest susceptibility, if any.
std::optional<BiasKind> dominant_bias(const BiasProfile& p);

struct ActionSpec {
  std::string technique_id;
  HostId target_host;
  double p_detect = 0.0;
  double p_success = 1.0;
  double reward = 0.0;
  double time_cost = 1.0;
  std::optional<std::string> uses_artifact;
  // Shell command the action is carried out with.
  std::string command;

  bool operator==(const ActionSpec&) const = default;
};

struct Tally {
  int successes = 0;
  int tries = 0;
  bool operator==(const Tally&) const = default;
};

struct HistoryEntry {
  double time = 0.0;
  ActionSpec action;
  bool succeeded = false;
  bool operator==(const HistoryEntry&) const = default;
};

struct AttackerState {
  HostId foothold;
  std::set<HostId> discovered;
  std::map<std::string, Tally> tally;
  std::map<HostId, double> sunk_cost;
  std::optional<std::string> preferred_technique;
  std::vector<HistoryEntry> history;
  double clock = 0.0;
  double budget = 960.0;
  // Most recent outcome per technique.
  std::map<std::string, bool> last_outcome;
  // Outcome counts per concrete action (technique|target|artifact).
  std::map<std::string, Tally> attempts;
  std::vector<HostId> trail;  // earlier footholds, most recent last

  bool operator==(const AttackerState&) const = default;
};

inline constexpr double kDefaultBudgetMinutes = 960.0;

AttackerState initial_state(const Scenario& scenario, double budget = kDefaultBudgetMinutes);

std::string action_key(const ActionSpec& a);

// Per-technique parameters of the action menu; editorial defaults, overridable
// from experiment configuration.
struct TechniqueParams {
  double p_detect = 0.1;
  double p_success = 1.0;
  double reward = 0.1;
  double time_cost = 5.0;
};

struct AgentConfig {
  std::map<std::string, TechniqueParams> techniques;
  double on_path_entry_success = 0.9;   // lateral success into attack-path hosts
  double off_path_entry_success = 0.35;
  double unscanned_success_factor = 0.5;
  double scanned_dead_end_value = 0.3;  // value multiplier for off-path hosts once scanned
  double revisit_success = 0.95;
  double revisit_reward = 0.05;
  double frontier_revisit_reward = 0.4;  // revisiting a host that still has unexplored neighbors
  double exhausted_reward = 0.02;     // reward once an action's payoff is collected
  double failure_reward_decay = 0.5;  // reward multiplier per prior failure
  double verified_decoy_factor = 0.1;  // reward multiplier for decoy accounts once verified
  int exfil_min_rank = 10;
  double failure_detect_step = 0.1;  // p_detect added per earlier failure of the same action
  double quit_utility = -0.4;  // the session ends when nothing beats this
  std::vector<std::string> salience_keywords;
};

AgentConfig default_agent_config();

// Action menu at the current foothold. Empty once the budget cannot pay for
// any action. Throws StateInconsistent when the foothold is not a scenario host.
std::vector<ActionSpec> enumerate_actions(const AttackerState& state, const Scenario& scenario,
                                          const AgentConfig& cfg = default_agent_config());

// Success estimate for a technique: tally rate (0.5 before any try) blended
// with the last observed outcome by recency_weight * susceptibility[BaseRateNeglect].
double estimated_success(const std::string& technique_id, const AttackerState& state,
                         const BiasProfile& profile);

double biased_utility(const ActionSpec& a, const AttackerState& state, const BiasProfile& profile,
                      const AgentConfig& cfg = default_agent_config());

// Sunk-cost continuation rule: expected_reward >= -lambda_sunk * sunk_cost[host].
bool continue_target(const AttackerState& state, const HostId& host, const BiasProfile& profile,
                     double expected_reward);

struct StepResult {
  AttackerState state;
  ActionSpec chosen;
  bool succeeded = false;
};

// True once data has been exfiltrated from the deepest attack-path host.
bool mission_complete(const AttackerState& state, const Scenario& scenario);

// One decision: argmax of biased_utility (ties by technique id, then target
// host, then command), except that an agent with lambda_sunk > 0 keeps retrying
// its last failed action while continue_target holds for the utility gap to
// the argmax. Throws Error{SessionComplete} when no action is affordable.
StepResult step(const AttackerState& state, const Scenario& scenario, const BiasProfile& profile,
                RngStream& rng, const AgentConfig& cfg = default_agent_config());

// Applies an action outcome to a state (the bookkeeping half of step()).
void record_outcome(AttackerState& state, const ActionSpec& action, bool succeeded);

// record_outcome plus scenario effects: a failed aliased command closes the
// session and returns the attacker to the previous foothold.
void settle_outcome(AttackerState& state, const Scenario& scenario, const ActionSpec& action,
                    bool succeeded);

}  // namespace cogsim
