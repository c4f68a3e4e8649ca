#include <benchmark/benchmark.h>

#include <random>

#include "trafficrl/env/demand.hpp"
#include "trafficrl/env/episode.hpp"
#include "trafficrl/env/training.hpp"
#include "trafficrl/rl/agent.hpp"
#include "trafficrl/traffic/model.hpp"

using namespace trafficrl;

namespace {

void BM_StepNetwork(benchmark::State& state) {
  const auto p = traffic::ModelParams{};
  const auto topo = traffic::Topology::defaults();
  auto x = make_initial_state(topo, p, traffic::Weather::Good);
  traffic::Demands d{};
  d[0] = {1800.0, 270.0};
  d[1] = {1200.0, 120.0};
  d[2] = {1200.0, 120.0};
  const traffic::Controls u{0.5, 0.8, 0.8};
  for (auto _ : state) {
    x = step_network(x, u, d, traffic::Weather::Bad, topo, p);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_StepNetwork);

void BM_Episode(benchmark::State& state) {
  const auto sc = env::ScenarioConfig::defaults();
  env::EpisodeOptions opt;
  opt.strategy = env::Strategy::Fixed;
  opt.demand_seed = 1;
  for (auto _ : state) {
    const auto res = env::run_episode(sc, opt);
    benchmark::DoNotOptimize(res.total_tts);
  }
}
BENCHMARK(BM_Episode)->Unit(benchmark::kMillisecond);

void BM_DemandSynthesis(benchmark::State& state) {
  const auto sc = env::ScenarioConfig::defaults();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto d = env::synthesize_demand(sc.demand, sc.timing, seed++);
    benchmark::DoNotOptimize(d.size());
  }
}
BENCHMARK(BM_DemandSynthesis);

void BM_MlpForward(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const rl::Mlp net = rl::make_mlp({22, 64, 64, 8}, rl::Activation::Relu,
                                   rl::Activation::Tanh, rng);
  std::vector<double> x(22, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(x));
  }
}
BENCHMARK(BM_MlpForward);

void BM_MlpBackward(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const rl::Mlp net = rl::make_mlp({22, 64, 64, 8}, rl::Activation::Relu,
                                   rl::Activation::Tanh, rng);
  std::vector<double> x(22, 0.3), up(8, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rl::mlp_gradients(net, x, up));
  }
}
BENCHMARK(BM_MlpBackward);

void BM_DdpgTrainStep(benchmark::State& state) {
  const auto sc = env::ScenarioConfig::defaults();
  rl::Agent agent(env::agent_config(sc, env::Framework::Multi, 1), 7);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 256; ++i) {
    rl::Transition t;
    t.obs.assign(8, unit(rng));
    t.next_obs.assign(8, unit(rng));
    t.action.assign(3, unit(rng));
    t.reward = unit(rng);
    agent.push_transition(std::move(t));
  }
  std::mt19937_64 srng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent.train_step(srng));
  }
}
BENCHMARK(BM_DdpgTrainStep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
