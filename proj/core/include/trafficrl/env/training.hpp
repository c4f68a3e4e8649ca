#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trafficrl/env/episode.hpp"
#include "trafficrl/env/scenario.hpp"
#include "trafficrl/rl/agent.hpp"

namespace trafficrl::env {

enum class Framework { Multi, Single };

std::string framework_name(Framework f);
Framework framework_from_name(const std::string& name);

/// Action bounds of the route-guidance agent ([K_P, K_I]), a ramp agent
/// ([rho_bar, K_R, K_A]) and the joint single agent.
rl::ActionBounds dta_action_bounds();
rl::ActionBounds rm_action_bounds();
rl::ActionBounds single_action_bounds();

/// Agent configuration for agent `idx` (0 = route guidance, 1/2 = ramps) of
/// the multi-agent framework, or for the single agent when idx < 0.
rl::AgentConfig agent_config(const ScenarioConfig& sc, Framework f, int idx);

/// Freshly initialized agent bank: 3 agents for Multi, 1 for Single.
std::vector<rl::Agent> make_agents(const ScenarioConfig& sc, Framework f, std::uint64_t seed);

struct TrainOptions {
  Framework framework = Framework::Multi;
  int episodes = 10;
  std::uint64_t seed = 1;
};

struct TrainResult {
  std::vector<rl::Agent> agents;
  std::vector<double> episode_rewards;  // summed interval rewards per episode
};

/// Runs training episodes with exploration and one gradient step per agent
/// action. Deterministic in (scenario, options). Divergence is reported
/// with the failing episode index.
TrainResult train(const ScenarioConfig& sc, const TrainOptions& opt);

}  // namespace trafficrl::env
