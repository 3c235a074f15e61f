#include <algorithm>
#include <limits>

#include "cogsim/cogvuln_sensor.hpp"
#include "cogsim/error.hpp"

namespace cogsim {

namespace {

constexpr double kShadowBudget = 1e12;

double lookup(const std::map<std::string, double>& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

}  // namespace

ContextBuilder::ContextBuilder(SensorScenario env, SensorConfig cfg)
    : env_(std::move(env)), cfg_(std::move(cfg)) {
  if (!env_.scenario) throw Error(ErrorCode::StateInconsistent, "sensor scenario missing");
  shadow_ = initial_state(*env_.scenario, kShadowBudget);
}

SignalContext ContextBuilder::next(const TechniqueSignal& signal) {
  SignalContext ctx;
  ctx.signal = signal;
  ctx.prev_signal = prev_;

  std::string payload;
  if (env_.events && !signal.source_events.empty() &&
      signal.source_events.front() < env_.events->size()) {
    payload = (*env_.events)[signal.source_events.front()].payload;
  }

  const std::vector<ActionSpec> menu =
      enumerate_actions(shadow_, *env_.scenario, env_.action_model);

  // The observed action, recovered from the shadow menu when possible.
  ActionSpec observed;
  bool matched = false;
  for (const auto& a : menu) {
    if (a.technique_id == signal.technique_id && a.command == payload &&
        a.target_host == signal.target_host) {
      observed = a;
      matched = true;
      break;
    }
  }
  const double chosen_risk = lookup(cfg_.detection_risk, signal.technique_id, 0.0);
  if (!matched) {
    observed.technique_id = signal.technique_id;
    observed.target_host = signal.target_host;
    observed.p_detect = chosen_risk;
    observed.command = payload;
    observed.time_cost = 1.0;
  }

  // Options within the consideration margin of the best undistorted utility.
  const BiasProfile rational = zero_bias_profile();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> scored;  // (utility, risk)
  for (const auto& a : menu) {
    auto risk_it = cfg_.detection_risk.find(a.technique_id);
    if (risk_it == cfg_.detection_risk.end()) continue;
    const double u = estimated_success(a.technique_id, shadow_, rational) * a.reward -
                     risk_it->second - a.time_cost / kDefaultBudgetMinutes;
    best = std::max(best, u);
    scored.emplace_back(u, risk_it->second);
  }
  for (const auto& [u, risk] : scored) {
    if (u >= best - cfg_.consideration_margin) ctx.available_risks.push_back(risk);
  }
  if (cfg_.detection_risk.count(signal.technique_id)) ctx.available_risks.push_back(chosen_risk);

  const std::string key = action_key(observed);
  const double prior = lookup(cfg_.technique_priors, signal.technique_id, 0.5);
  double rate_before = prior;
  if (auto it = shadow_.tally.find(signal.technique_id);
      it != shadow_.tally.end() && it->second.tries > 0) {
    rate_before = static_cast<double>(it->second.successes) / it->second.tries;
  }
  ctx.expected_future_value =
      rate_before * cfg_.efv_gain - (1.0 - rate_before) * cfg_.efv_loss - chosen_risk;
  ctx.reengagement = shadow_.attempts.count(key) > 0;
  ctx.target_sunk_cost = lookup(action_sunk_, key, 0.0);

  if (observed.uses_artifact) {
    ctx.target_name = *observed.uses_artifact;
  } else if (const HostNode* h = env_.scenario->find_host(signal.target_host)) {
    ctx.target_name = h->display_name;
  } else {
    ctx.target_name = signal.target_host;
  }

  const bool ok = signal.succeeded.value_or(false);
  ctx.tally_snapshot = shadow_.tally;
  if (signal.succeeded) {
    Tally& t = ctx.tally_snapshot[signal.technique_id];
    ++t.tries;
    if (ok) ++t.successes;
  }

  settle_outcome(shadow_, *env_.scenario, observed, ok);
  action_sunk_[key] += chosen_risk;
  prev_ = signal;
  return ctx;
}

std::vector<SignalContext> build_contexts(const std::vector<TechniqueSignal>& signals,
                                          const SensorScenario& env, const SensorConfig& cfg) {
  ContextBuilder b(env, cfg);
  std::vector<SignalContext> out;
  out.reserve(signals.size());
  for (const auto& s : signals) out.push_back(b.next(s));
  return out;
}

}  // namespace cogsim
