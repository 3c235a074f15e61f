#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/bias.hpp"
#include "cogsim/mats_mapper.hpp"
#include "cogsim/salience.hpp"

namespace cogsim {

struct BeliefState {
  BiasVector b{};
  int step_index = 0;

  bool operator==(const BeliefState&) const = default;
};

inline constexpr double kInitialBelief = 0.2;
BeliefState initial_beliefs();

struct SensorConfig {
  double eta_loss = 0.1;
  double eta_base = 0.07;
  double decay = 0.02;
  double eta_avail = 0.1;
  double alpha_sunk = 0.1;
  std::map<std::string, double> technique_priors;  // p_prior per technique
  std::map<std::string, double> detection_risk;    // P_disc per technique
  std::vector<std::string> salience_keywords = default_salience_keywords();
  double salience_threshold = 0.8;

  // Context reconstruction. Alternatives whose estimated utility is within
  // `consideration_margin` of the best count as the options available at a step.
  double consideration_margin = 0.25;
  // Expected future value of repeating an action:
  // rate * efv_gain - (1 - rate) * efv_loss - P_disc.
  double efv_gain = 1.0;
  double efv_loss = 1.0;

  bool operator==(const SensorConfig&) const = default;
};

// Priors and risks for the agent's technique vocabulary.
SensorConfig default_sensor_config();
// Throws ConfigError when a rate, prior or risk leaves [0,1].
void validate_sensor_config(const SensorConfig& cfg);
SensorConfig load_sensor_config(std::string_view json_text);
SensorConfig load_sensor_config_file(const std::string& path);
std::string sensor_config_to_json(const SensorConfig& cfg);

struct SignalContext {
  TechniqueSignal signal;
  std::vector<double> available_risks;
  std::optional<TechniqueSignal> prev_signal;
  std::map<std::string, Tally> tally_snapshot;  // includes the current signal
  double target_sunk_cost = 0.0;
  double expected_future_value = 0.0;
  std::string target_name;
  bool reengagement = false;  // the same action was observed earlier in the session
};

// b grows by eta_loss of its headroom when the chosen technique's risk is below
// the maximum available risk and shrinks by eta_loss of itself when it is the
// unique maximum (or above every alternative); a shared maximum leaves b
// unchanged, as does an empty alternative list.
double update_loss_aversion(double b, const SignalContext& ctx, const SensorConfig& cfg);

// Reactive moves (repeat after success, switch after failure) raise b by
// eta_base of the headroom; persistence or exploration lowers it by `decay`.
double update_base_rate_neglect(double b, const SignalContext& ctx, const SensorConfig& cfg);

// Rises by delta = p_prior - rate of the headroom when the technique's observed
// success rate is below its prior, otherwise decays.
double update_confirmation(double b, const SignalContext& ctx, const SensorConfig& cfg);

// On re-engagement with negative expected future value:
// b + alpha_sunk * min(1, -EFV / (-EFV + sunk + 1)), capped at 1.
double update_sunk_cost(double b, const SignalContext& ctx, const SensorConfig& cfg);

double update_availability(double b, const SignalContext& ctx, const SensorConfig& cfg);

// All five updaters in a fixed order (loss, base rate, confirmation, sunk
// cost, availability); step_index advances by one.
BeliefState apply_updates(const BeliefState& s, const SignalContext& ctx, const SensorConfig& cfg);

// b_k / sum(b), or uniform 0.2 when every belief is 0.
BiasVector normalize_beliefs(const BeliefState& s);

BiasKind argmax_bias(const BiasVector& v);

// Trajectory over precomputed contexts, starting from `initial`; its length
// is contexts.size() + 1. Updater errors are rethrown with the signal index.
std::vector<BeliefState> run_sensor(const std::vector<SignalContext>& contexts,
                                    const SensorConfig& cfg,
                                    const BeliefState& initial = initial_beliefs());

// What the defender knows about the session environment.
struct SensorScenario {
  const Scenario* scenario = nullptr;
  const std::vector<EventRecord>* events = nullptr;  // the stream signals index into
  AgentConfig action_model = default_agent_config();
};

// Rebuilds decision context signal by signal by shadowing the attacker: the
// shadow's action menu gives the alternatives, the matching command gives the
// artifact, and the observed outcomes drive tallies, foothold and sunk cost.
class ContextBuilder {
 public:
  ContextBuilder(SensorScenario env, SensorConfig cfg);

  SignalContext next(const TechniqueSignal& signal);

 private:
  SensorScenario env_;
  SensorConfig cfg_;
  AttackerState shadow_;
  std::optional<TechniqueSignal> prev_;
  std::map<std::string, double> action_sunk_;
};

std::vector<SignalContext> build_contexts(const std::vector<TechniqueSignal>& signals,
                                          const SensorScenario& env, const SensorConfig& cfg);

// Convenience: build contexts from the scenario and run the updaters.
std::vector<BeliefState> run_sensor(const std::vector<TechniqueSignal>& signals,
                                    const SensorScenario& env, const SensorConfig& cfg);

// CSV: step,signal_index, five raw beliefs, five normalized beliefs.
std::string trajectory_csv(const std::vector<BeliefState>& trajectory);

}  // namespace cogsim
