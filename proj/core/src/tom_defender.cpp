#include "cogsim/tom_defender.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "cogsim/error.hpp"
#include "cogsim/pattern.hpp"
#include "cogsim/rng.hpp"
#include "cogsim/session.hpp"

namespace cogsim {

std::vector<AttackerHypothesis> hypotheses_from_beliefs(const BiasVector& normalized) {
  double sum = 0.0;
  for (BiasKind k : kAllBiases) {
    const double w = normalized[k];
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::NotNormalized, "weight for " + std::string(to_string(k)) +
                                                " outside [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotNormalized, "weights sum to " + std::to_string(sum));
  }
  std::vector<AttackerHypothesis> out;
  for (BiasKind k : kAllBiases) out.push_back({k, archetype_profile(k), normalized[k]});
  return out;
}

namespace {

bool touches_trigger(const TraceStep& s, const TriggerSpec& t) {
  if (s.source_host != t.host_id && s.action.target_host != t.host_id) return false;
  if (any_pattern_matches(t.biased_signatures, s.action.command) ||
      any_pattern_matches(t.rational_signatures, s.action.command)) {
    return true;
  }
  if (!s.action.uses_artifact) return false;
  const std::string& used = *s.action.uses_artifact;
  for (const auto& a : t.artifacts) {
    if (a.name == used) return true;
    for (const auto& tag : a.salience_tags) {
      const auto colon = tag.find(':');
      if (colon != std::string::npos && tag.substr(colon + 1) == used) return true;
    }
  }
  return false;
}

int alert_count(const SessionTrace& tr) {
  return static_cast<int>(std::count_if(tr.events.begin(), tr.events.end(), [](const EventRecord& e) {
    return e.kind == EventKind::Alert;
  }));
}

}  // namespace

PredictionSummary counterfactual_rollout(const Scenario& scenario,
                                         const std::vector<AttackerHypothesis>& hyps,
                                         const TriggerSpec& candidate, int horizon_steps,
                                         int samples, std::uint64_t seed,
                                         const RolloutOptions& opts) {
  if (horizon_steps <= 0) throw Error(ErrorCode::HorizonEmpty, "horizon_steps must be positive");
  if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be >= 1");
  if (!scenario.find_host(candidate.host_id)) {
    throw Error(ErrorCode::ScenarioInvalid,
                "candidate " + candidate.trigger_id + " references unknown host " + candidate.host_id);
  }

  Scenario without = scenario;
  std::erase_if(without.triggers,
                [&](const TriggerSpec& t) { return t.trigger_id == candidate.trigger_id; });
  const Scenario with = with_trigger(scenario, candidate);

  SessionParams params;
  params.max_steps = horizon_steps;
  params.agent = opts.agent;
  params.start = opts.start;

  PredictionSummary out;
  out.trigger_id = candidate.trigger_id;
  out.sample_count = samples;
  for (const auto& h : hyps) {
    if (h.weight == 0.0) continue;
    RolloutStats st;
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t sample_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
      const SessionTrace a = simulate_session(with, h.profile, sample_seed, params);
      const SessionTrace b = simulate_session(without, h.profile, sample_seed, params);
      bool touched = false;
      for (const auto& step : a.steps) {
        if (!touches_trigger(step, candidate)) continue;
        touched = true;
        st.time_diverted += step.action.time_cost + candidate.interaction_time_cost;
      }
      if (touched) st.interaction_probability += 1.0;
      st.alert_delta += alert_count(a) - alert_count(b);
    }
    st.interaction_probability /= samples;
    st.time_diverted /= samples;
    st.alert_delta /= samples;
    out.expected_interaction_probability += h.weight * st.interaction_probability;
    out.expected_time_diverted += h.weight * st.time_diverted;
    out.expected_alert_delta += h.weight * st.alert_delta;
    out.per_hypothesis.emplace_back(h.bias, st);
  }
  out.expected_interaction_probability = std::clamp(out.expected_interaction_probability, 0.0, 1.0);
  return out;
}

std::vector<Recommendation> recommend_trigger(const Scenario& scenario,
                                              const std::vector<AttackerHypothesis>& hyps,
                                              const std::vector<TriggerSpec>& candidates,
                                              RecommendWeights weights, int horizon_steps,
                                              int samples, std::uint64_t seed,
                                              const RolloutOptions& opts) {
  if (candidates.empty()) throw Error(ErrorCode::ConfigError, "no candidate triggers");
  // Rank each candidate against the scenario with no other trigger installed.
  const Scenario base = without_triggers(scenario);
  std::vector<Recommendation> out;
  for (const auto& c : candidates) {
    Recommendation r;
    r.trigger_id = c.trigger_id;
    r.summary = counterfactual_rollout(base, hyps, c, horizon_steps, samples, seed, opts);
    r.score = weights.w_time * r.summary.expected_time_diverted +
              weights.w_alert * r.summary.expected_alert_delta;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.trigger_id < b.trigger_id;
  });
  return out;
}

std::string recommendations_to_json(const std::vector<Recommendation>& recs,
                                    const std::vector<AttackerHypothesis>& hyps) {
  using oj = nlohmann::ordered_json;
  oj root;
  oj hj = oj::array();
  for (const auto& h : hyps) hj.push_back({{"bias", to_string(h.bias)}, {"weight", h.weight}});
  root["hypotheses"] = hj;
  oj ranked = oj::array();
  for (const auto& r : recs) {
    oj item;
    item["trigger_id"] = r.trigger_id;
    item["score"] = r.score;
    item["expected_interaction_probability"] = r.summary.expected_interaction_probability;
    item["expected_time_diverted"] = r.summary.expected_time_diverted;
    item["expected_alert_delta"] = r.summary.expected_alert_delta;
    item["sample_count"] = r.summary.sample_count;
    oj per = oj::array();
    for (const auto& [bias, st] : r.summary.per_hypothesis) {
      per.push_back({{"bias", to_string(bias)},
                     {"interaction_probability", st.interaction_probability},
                     {"time_diverted", st.time_diverted},
                     {"alert_delta", st.alert_delta}});
    }
    item["per_hypothesis"] = per;
    ranked.push_back(std::move(item));
  }
  root["ranking"] = ranked;
  return root.dump(2) + "\n";
}

}  // namespace cogsim
