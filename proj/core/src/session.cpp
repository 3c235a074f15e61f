#include "cogsim/session.hpp"

#include "cogsim/error.hpp"

namespace cogsim {

SessionTrace simulate_session(const Scenario& scenario, const BiasProfile& profile,
                              std::uint64_t seed, const SessionParams& params) {
  check_profile(profile);
  RngStream agent_rng(derive_seed(seed, 0));
  RngStream sensor_rng(derive_seed(seed, 1));
  SessionTrace trace;
  AttackerState state = params.start ? *params.start : initial_state(scenario);
  for (int i = 0; i < params.max_steps; ++i) {
    StepResult r;
    try {
      r = step(state, scenario, profile, agent_rng, params.agent);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SessionComplete) break;
      throw;
    }
    const HostNode* target = scenario.find_host(r.chosen.target_host);
    EmitContext ctx{params.actor, state.foothold, target ? target->alert_sensitivity : 1.0};
    auto ev = emit_events(r.chosen, r.succeeded, state.clock, ctx, sensor_rng);
    trace.events.insert(trace.events.end(), ev.begin(), ev.end());
    if (!technique::is_lateral(r.chosen.technique_id) && r.state.foothold != state.foothold) {
      trace.events.push_back({state.clock, EventKind::Session, state.foothold, params.actor,
                              kSessionClose, std::nullopt});
    }
    trace.steps.push_back({state.foothold, r.chosen, r.succeeded, state.clock});
    state = std::move(r.state);
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace cogsim
