#include "trafficrl/env/training.hpp"

#include <numeric>
#include <stdexcept>

#include "trafficrl/env/observation.hpp"
#include "trafficrl/seeds.hpp"

namespace trafficrl::env {

std::string framework_name(Framework f) { return f == Framework::Multi ? "multi" : "single"; }

Framework framework_from_name(const std::string& name) {
  if (name == "multi") return Framework::Multi;
  if (name == "single") return Framework::Single;
  throw std::invalid_argument("unknown framework: " + name);
}

rl::ActionBounds dta_action_bounds() { return {{0.0, 0.0}, {0.5, 0.1}}; }

rl::ActionBounds rm_action_bounds() { return {{15.0, 0.0, 0.0}, {50.0, 0.05, 0.1}}; }

rl::ActionBounds single_action_bounds() {
  return {{0.0, 0.0, 15.0, 0.0, 0.0, 15.0, 0.0, 0.0},
          {0.5, 0.1, 50.0, 0.05, 0.1, 50.0, 0.05, 0.1}};
}

rl::AgentConfig agent_config(const ScenarioConfig& sc, Framework f, int idx) {
  rl::AgentConfig cfg;
  cfg.hidden = sc.ddpg.hidden;
  cfg.gamma = sc.ddpg.gamma;
  cfg.lr = sc.ddpg.lr;
  cfg.soft_update_rate = sc.ddpg.soft_update;
  cfg.buffer_capacity = sc.ddpg.buffer;
  cfg.batch_size = sc.ddpg.batch;
  cfg.noise_std = sc.ddpg.noise_std;
  cfg.noise_decay = sc.ddpg.noise_decay;
  cfg.noise_floor = sc.ddpg.noise_floor;
  if (f == Framework::Single) {
    cfg.obs_dim = kObsDimSingle;
    cfg.bounds = single_action_bounds();
  } else {
    cfg.obs_dim = kObsDimMulti;
    cfg.bounds = (idx == 0) ? dta_action_bounds() : rm_action_bounds();
  }
  cfg.action_dim = static_cast<int>(cfg.bounds.dims());
  return cfg;
}

std::vector<rl::Agent> make_agents(const ScenarioConfig& sc, Framework f, std::uint64_t seed) {
  std::vector<rl::Agent> agents;
  const int n = (f == Framework::Multi) ? 3 : 1;
  agents.reserve(n);
  for (int i = 0; i < n; ++i)
    agents.emplace_back(agent_config(sc, f, i), mix_seed(seed, "agent-init", i));
  return agents;
}

TrainResult train(const ScenarioConfig& sc, const TrainOptions& opt) {
  if (opt.episodes < 0) throw std::invalid_argument("train: episodes must be >= 0");
  TrainResult out;
  out.agents = make_agents(sc, opt.framework, opt.seed);
  std::vector<rl::Agent*> bank;
  for (auto& a : out.agents) bank.push_back(&a);

  out.episode_rewards.reserve(opt.episodes);
  for (int ep = 0; ep < opt.episodes; ++ep) {
    EpisodeOptions eopt;
    eopt.strategy = (opt.framework == Framework::Multi) ? Strategy::Multi : Strategy::Single;
    eopt.training = true;
    eopt.demand_seed = mix_seed(opt.seed, "train-demand", ep);
    eopt.explore_seed = mix_seed(opt.seed, "train-explore", ep);
    eopt.sample_seed = mix_seed(opt.seed, "train-sample", ep);
    try {
      const EpisodeResult res = run_episode(sc, eopt, bank);
      out.episode_rewards.push_back(
          std::accumulate(res.rewards.begin(), res.rewards.end(), 0.0));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("training episode " + std::to_string(ep) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace trafficrl::env
