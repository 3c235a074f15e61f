#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/telemetry.hpp"

namespace cogsim {

struct TraceStep {
  HostId source_host;  // foothold when the action was taken
  ActionSpec action;
  bool succeeded = false;
  double time = 0.0;
};

struct SessionTrace {
  std::vector<TraceStep> steps;
  std::vector<EventRecord> events;
  AttackerState final_state;
};

struct SessionParams {
  int max_steps = 400;
  std::string actor = "attacker";
  AgentConfig agent = default_agent_config();
  std::optional<AttackerState> start;  // defaults to initial_state(scenario)
};

// Runs the agent until the step limit or an empty menu. Agent draws and
// telemetry draws come from two streams derived from `seed`, so runs that
// differ only in installed triggers stay aligned as long as their choices do.
SessionTrace simulate_session(const Scenario& scenario, const BiasProfile& profile,
                              std::uint64_t seed, const SessionParams& params = {});

}  // namespace cogsim
