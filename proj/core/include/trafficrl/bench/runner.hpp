#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trafficrl/env/episode.hpp"
#include "trafficrl/env/scenario.hpp"
#include "trafficrl/rl/agent.hpp"

namespace trafficrl::bench {

struct EvalOptions {
  int runs = 5;
  std::uint64_t base_seed = 1;
  double sigma = 0.0;  // observation failure noise, percent std
  int threads = 0;     // 0 = hardware concurrency
};

/// Total TTS per run index. Demand realizations are seeded by
/// (base_seed, run index) only, so every strategy faces the same traffic
/// per run index; evaluation never mutates the agents.
std::vector<double> evaluate_strategy(const env::ScenarioConfig& sc, env::Strategy strategy,
                                      std::span<rl::Agent* const> agents, const EvalOptions& opt);

std::uint64_t run_demand_seed(std::uint64_t base_seed, int run);

}  // namespace trafficrl::bench
