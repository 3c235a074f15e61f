#include <benchmark/benchmark.h>

#include "cogsim/cogvuln_sensor.hpp"
#include "cogsim/harness.hpp"
#include "cogsim/metrics_stats.hpp"
#include "cogsim/session.hpp"

using namespace cogsim;

namespace {

const Scenario& canonical() {
  static const Scenario s = load_scenario_file(std::string(COGSIM_DATA_DIR) + "/canonical_scenario.json");
  return s;
}

void BM_SimulateSession(benchmark::State& state) {
  const BiasProfile p = archetype_profile(static_cast<BiasKind>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_session(canonical(), p, ++seed).steps.size());
}
BENCHMARK(BM_SimulateSession)->DenseRange(0, 4);

void BM_SensorPipeline(benchmark::State& state) {
  const auto tr = simulate_session(canonical(), archetype_profile(BiasKind::Confirmation), 7);
  const auto signals = map_events(tr.events, default_rule_table());
  const SensorConfig cfg = load_sensor_config_file(std::string(COGSIM_DATA_DIR) + "/sensor_config.json");
  const SensorScenario env{&canonical(), &tr.events, default_agent_config()};
  for (auto _ : state) benchmark::DoNotOptimize(run_sensor(signals, env, cfg).back());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(signals.size()));
}
BENCHMARK(BM_SensorPipeline);

void BM_AnalyzeSession(benchmark::State& state) {
  const auto tr = simulate_session(canonical(), zero_bias_profile(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_session(tr.events, canonical()).progress_rank);
}
BENCHMARK(BM_AnalyzeSession);

void BM_MannWhitney(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a, b;
  RngStream rng(1);
  for (std::size_t i = 0; i < n; ++i) {
    a.push_back(rng.uniform());
    b.push_back(rng.uniform() + 0.1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(a, b).p);
}
BENCHMARK(BM_MannWhitney)->Arg(8)->Arg(50)->Arg(500);

}  // namespace
BENCHMARK_MAIN();
