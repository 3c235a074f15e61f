#include "cogsim/cogvuln_sensor.hpp"

#include <algorithm>
#include <cstdio>

#include "cogsim/error.hpp"
#include "json_util.hpp"

namespace cogsim {

using detail::json;

BeliefState initial_beliefs() {
  BeliefState s;
  for (BiasKind k : kAllBiases) s.b[k] = kInitialBelief;
  return s;
}

SensorConfig default_sensor_config() {
  using namespace technique;
  SensorConfig c;
  const AgentConfig agent = default_agent_config();
  for (const auto& [id, p] : agent.techniques) c.detection_risk[id] = p.p_detect;
  c.technique_priors = {
      {kNetworkScan, 0.9},      {kAccountDiscovery, 0.95}, {kFileDiscovery, 0.95},
      {kPermissionCheck, 0.95}, {kRemoteServices, 0.45},   {kBruteForce, 0.3},
      {kValidAccounts, 0.5},    {kFoundCredentials, 0.25}, {kExploitPublicApp, 0.6},
      {kPasswordCracking, 0.05}, {kLocalData, 0.95},       {kCreateAccount, 0.85},
      {kExfiltration, 0.7},
  };
  return c;
}

void validate_sensor_config(const SensorConfig& cfg) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  const std::pair<const char*, double> rates[] = {{"eta_loss", cfg.eta_loss},
                                                  {"eta_base", cfg.eta_base},
                                                  {"decay", cfg.decay},
                                                  {"eta_avail", cfg.eta_avail},
                                                  {"alpha_sunk", cfg.alpha_sunk},
                                                  {"salience_threshold", cfg.salience_threshold}};
  for (const auto& [name, v] : rates) {
    if (!in01(v)) detail::config_error(std::string("sensor.") + name, "outside [0,1]");
  }
  for (const auto& [id, v] : cfg.technique_priors) {
    if (!in01(v)) detail::config_error("sensor.technique_priors." + id, "outside [0,1]");
  }
  for (const auto& [id, v] : cfg.detection_risk) {
    if (!in01(v)) detail::config_error("sensor.detection_risk." + id, "outside [0,1]");
  }
  if (!(cfg.consideration_margin >= 0.0)) {
    detail::config_error("sensor.consideration_margin", "negative");
  }
}

namespace {

std::map<std::string, double> number_map(const json& root, const char* key,
                                         const std::map<std::string, double>& fallback) {
  if (!root.contains(key)) return fallback;
  const json& obj = root.at(key);
  const std::string path = std::string("sensor.") + key;
  if (!obj.is_object()) detail::config_error(path, "expected object");
  std::map<std::string, double> out = fallback;  // entries override defaults
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    out[it.key()] = detail::get_number(it.value(), path + "." + it.key());
  }
  return out;
}

}  // namespace

SensorConfig load_sensor_config(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "sensor");
  if (!root.is_object()) detail::config_error("sensor", "expected object");
  SensorConfig d = default_sensor_config();
  SensorConfig c;
  c.eta_loss = detail::get_number_or(root, "eta_loss", d.eta_loss, "sensor");
  c.eta_base = detail::get_number_or(root, "eta_base", d.eta_base, "sensor");
  c.decay = detail::get_number_or(root, "decay", d.decay, "sensor");
  c.eta_avail = detail::get_number_or(root, "eta_avail", d.eta_avail, "sensor");
  c.alpha_sunk = detail::get_number_or(root, "alpha_sunk", d.alpha_sunk, "sensor");
  c.technique_priors = number_map(root, "technique_priors", d.technique_priors);
  c.detection_risk = number_map(root, "detection_risk", d.detection_risk);
  c.salience_keywords = root.contains("salience_keywords")
                            ? detail::get_strings(root, "salience_keywords", "sensor")
                            : d.salience_keywords;
  c.salience_threshold =
      detail::get_number_or(root, "salience_threshold", d.salience_threshold, "sensor");
  c.consideration_margin =
      detail::get_number_or(root, "consideration_margin", d.consideration_margin, "sensor");
  c.efv_gain = detail::get_number_or(root, "efv_gain", d.efv_gain, "sensor");
  c.efv_loss = detail::get_number_or(root, "efv_loss", d.efv_loss, "sensor");
  validate_sensor_config(c);
  return c;
}

SensorConfig load_sensor_config_file(const std::string& path) {
  return load_sensor_config(detail::read_file(path));
}

std::string sensor_config_to_json(const SensorConfig& c) {
  nlohmann::ordered_json j;
  j["eta_loss"] = c.eta_loss;
  j["eta_base"] = c.eta_base;
  j["decay"] = c.decay;
  j["eta_avail"] = c.eta_avail;
  j["alpha_sunk"] = c.alpha_sunk;
  j["technique_priors"] = c.technique_priors;
  j["detection_risk"] = c.detection_risk;
  j["salience_keywords"] = c.salience_keywords;
  j["salience_threshold"] = c.salience_threshold;
  j["consideration_margin"] = c.consideration_margin;
  j["efv_gain"] = c.efv_gain;
  j["efv_loss"] = c.efv_loss;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Updaters

double update_loss_aversion(double b, const SignalContext& ctx, const SensorConfig& cfg) {
  auto it = cfg.detection_risk.find(ctx.signal.technique_id);
  if (it == cfg.detection_risk.end()) {
    throw Error(ErrorCode::UnknownTechniqueRisk, ctx.signal.technique_id);
  }
  if (ctx.available_risks.empty()) return b;
  const double chosen = it->second;
  const double max_risk = *std::max_element(ctx.available_risks.begin(), ctx.available_risks.end());
  if (chosen < max_risk) return std::min(1.0, b + (1.0 - b) * cfg.eta_loss);
  const auto at_max = std::count(ctx.available_risks.begin(), ctx.available_risks.end(), max_risk);
  if (chosen > max_risk || at_max == 1) return std::max(0.0, b - b * cfg.eta_loss);
  return b;
}

double update_base_rate_neglect(double b, const SignalContext& ctx, const SensorConfig& cfg) {
  if (!ctx.prev_signal || !ctx.prev_signal->succeeded) return b;
  const bool repeated = ctx.prev_signal->technique_id == ctx.signal.technique_id;
  const bool prev_ok = *ctx.prev_signal->succeeded;
  const bool reactive = (repeated && prev_ok) || (!repeated && !prev_ok);
  if (reactive) return std::min(1.0, b + (1.0 - b) * cfg.eta_base);
  return std::max(0.0, b - cfg.decay);
}

double update_confirmation(double b, const SignalContext& ctx, const SensorConfig& cfg) {
  auto prior_it = cfg.technique_priors.find(ctx.signal.technique_id);
  if (prior_it == cfg.technique_priors.end()) {
    throw Error(ErrorCode::UnknownTechniquePrior, ctx.signal.technique_id);
  }
  const double prior = prior_it->second;
  double rate = prior;
  if (auto it = ctx.tally_snapshot.find(ctx.signal.technique_id);
      it != ctx.tally_snapshot.end() && it->second.tries > 0) {
    rate = static_cast<double>(it->second.successes) / it->second.tries;
  }
  if (rate < prior) return std::min(1.0, b + (1.0 - b) * (prior - rate));
  return std::max(0.0, b - cfg.decay);
}

double update_sunk_cost(double b, const SignalContext& ctx, const SensorConfig& cfg) {
  if (!ctx.reengagement || !(ctx.expected_future_value < 0.0)) return b;
  const double loss = -ctx.expected_future_value;
  const double ratio = std::min(1.0, loss / (loss + ctx.target_sunk_cost + 1.0));
  return std::min(1.0, cfg.alpha_sunk * ratio + b);
}

double update_availability(double b, const SignalContext& ctx, const SensorConfig& cfg) {
  if (lexical_salience(ctx.target_name, cfg.salience_keywords) >= cfg.salience_threshold) {
    return std::min(1.0, b + (1.0 - b) * cfg.eta_avail);
  }
  return b;
}

BeliefState apply_updates(const BeliefState& s, const SignalContext& ctx, const SensorConfig& cfg) {
  BeliefState out = s;
  out.b[BiasKind::LossAversion] = update_loss_aversion(s.b[BiasKind::LossAversion], ctx, cfg);
  out.b[BiasKind::BaseRateNeglect] =
      update_base_rate_neglect(s.b[BiasKind::BaseRateNeglect], ctx, cfg);
  out.b[BiasKind::Confirmation] = update_confirmation(s.b[BiasKind::Confirmation], ctx, cfg);
  out.b[BiasKind::SunkCost] = update_sunk_cost(s.b[BiasKind::SunkCost], ctx, cfg);
  out.b[BiasKind::Availability] = update_availability(s.b[BiasKind::Availability], ctx, cfg);
  out.step_index = s.step_index + 1;
  return out;
}

BiasVector normalize_beliefs(const BeliefState& s) {
  double total = 0.0;
  for (BiasKind k : kAllBiases) total += s.b[k];
  BiasVector out;
  for (BiasKind k : kAllBiases) {
    out[k] = total > 0.0 ? s.b[k] / total : 1.0 / static_cast<double>(kBiasCount);
  }
  return out;
}

BiasKind argmax_bias(const BiasVector& v) {
  BiasKind best = kAllBiases[0];
  for (BiasKind k : kAllBiases) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

std::vector<BeliefState> run_sensor(const std::vector<SignalContext>& contexts,
                                    const SensorConfig& cfg, const BeliefState& initial) {
  std::vector<BeliefState> traj;
  traj.reserve(contexts.size() + 1);
  traj.push_back(initial);
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    try {
      traj.push_back(apply_updates(traj.back(), contexts[i], cfg));
    } catch (const Error& e) {
      throw Error(e.code(), "signal " + std::to_string(i) + ": " + e.what());
    }
  }
  return traj;
}

std::vector<BeliefState> run_sensor(const std::vector<TechniqueSignal>& signals,
                                    const SensorScenario& env, const SensorConfig& cfg) {
  std::vector<SignalContext> contexts;
  ContextBuilder builder(env, cfg);
  contexts.reserve(signals.size());
  for (std::size_t i = 0; i < signals.size(); ++i) {
    try {
      contexts.push_back(builder.next(signals[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "signal " + std::to_string(i) + ": " + e.what());
    }
  }
  return run_sensor(contexts, cfg);
}

std::string trajectory_csv(const std::vector<BeliefState>& trajectory) {
  std::string out = "step,signal_index";
  for (BiasKind k : kAllBiases) out += ",b_" + std::string(to_string(k));
  for (BiasKind k : kAllBiases) out += ",p_" + std::string(to_string(k));
  out += '\n';
  char buf[32];
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const BeliefState& s = trajectory[i];
    out += std::to_string(s.step_index) + ',';
    out += i == 0 ? std::string("-1") : std::to_string(i - 1);
    const BiasVector n = normalize_beliefs(s);
    for (BiasKind k : kAllBiases) {
      std::snprintf(buf, sizeof buf, ",%.6f", s.b[k]);
      out += buf;
    }
    for (BiasKind k : kAllBiases) {
      std::snprintf(buf, sizeof buf, ",%.6f", n[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace cogsim
