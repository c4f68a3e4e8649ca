#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trafficrl/env/scenario.hpp"
#include "trafficrl/rl/agent.hpp"
#include "trafficrl/traffic/state.hpp"

namespace trafficrl::env {

enum class Strategy { NoControl, Fixed, Multi, Single };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);  // throws on unknown

struct EpisodeOptions {
  Strategy strategy = Strategy::NoControl;
  std::uint64_t demand_seed = 0;
  double obs_noise_sigma = 0.0;       // percent std of the failure noise
  std::uint64_t obs_noise_seed = 0;
  bool training = false;              // exploration + transition collection
  std::uint64_t explore_seed = 0;
  std::uint64_t sample_seed = 0;
};

struct EpisodeResult {
  std::vector<double> step_tts;              // J_TTS per step [veh*h]
  std::vector<traffic::Controls> controls;   // applied control per step
  std::vector<double> rewards;               // one per tuning interval
  double total_tts = 0.0;
  // Controller parameters in effect per tuning step:
  // [K_P, K_I, rho_bar1, K_R1, K_A1, rho_bar2, K_R2, K_A2].
  std::vector<std::array<double, 8>> param_trace;
  // Scaled agent actions per tuning step (empty for non-RL strategies).
  std::vector<std::vector<std::vector<double>>> agent_actions;  // [tuning][agent][dim]
  std::vector<rl::Agent::TrainStats> train_stats;
};

/// Reward of one tuning interval: tts covers the interval's steps and
/// `controls_incl_prev` additionally carries the control vector in effect
/// just before the interval (size tts.size() + 1).
double compute_reward(std::span<const double> tts,
                      std::span<const traffic::Controls> controls_incl_prev,
                      const RewardConfig& cfg);

/// Runs one 5.5 h episode under the given strategy. `agents` must hold 3
/// agents for Multi, 1 for Single, and may be empty otherwise. Agents are
/// mutated only when training (exploration decay, replay, gradient steps).
EpisodeResult run_episode(const ScenarioConfig& sc, const EpisodeOptions& opt,
                          std::span<rl::Agent* const> agents = {});

}  // namespace trafficrl::env
