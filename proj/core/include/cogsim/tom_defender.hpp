#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/bias.hpp"
#include "cogsim/range_model.hpp"

namespace cogsim {

struct AttackerHypothesis {
  BiasKind bias = BiasKind::LossAversion;
  BiasProfile profile;
  double weight = 0.0;
};

// Requires a distribution summing to 1 (within 1e-9), else NotNormalized.
std::vector<AttackerHypothesis> hypotheses_from_beliefs(const BiasVector& normalized);

struct RolloutStats {
  double interaction_probability = 0.0;
  double time_diverted = 0.0;
  double alert_delta = 0.0;
};

struct PredictionSummary {
  std::string trigger_id;
  double expected_interaction_probability = 0.0;
  double expected_time_diverted = 0.0;
  double expected_alert_delta = 0.0;
  int sample_count = 0;
  // Unweighted statistics for each hypothesis with nonzero weight.
  std::vector<std::pair<BiasKind, RolloutStats>> per_hypothesis;
};

struct RolloutOptions {
  AgentConfig agent = default_agent_config();
  std::optional<AttackerState> start;
};

// Paired rollouts: every sample runs once with the candidate installed and once
// without, on the same seed. Sample streams are shared across hypotheses, so
// the summary is exactly linear in the weights.
PredictionSummary counterfactual_rollout(const Scenario& scenario,
                                         const std::vector<AttackerHypothesis>& hyps,
                                         const TriggerSpec& candidate, int horizon_steps,
                                         int samples, std::uint64_t seed,
                                         const RolloutOptions& opts = {});

struct RecommendWeights {
  double w_time = 1.0;
  double w_alert = 1.0;
};

struct Recommendation {
  std::string trigger_id;
  double score = 0.0;
  PredictionSummary summary;
};

std::vector<Recommendation> recommend_trigger(const Scenario& scenario,
                                              const std::vector<AttackerHypothesis>& hyps,
                                              const std::vector<TriggerSpec>& candidates,
                                              RecommendWeights weights, int horizon_steps,
                                              int samples, std::uint64_t seed,
                                              const RolloutOptions& opts = {});

std::string recommendations_to_json(const std::vector<Recommendation>& recs,
                                    const std::vector<AttackerHypothesis>& hyps);

}  // namespace cogsim
