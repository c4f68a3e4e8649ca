#include "trafficrl/env/episode.hpp"

#include <cmath>
#include <stdexcept>

#include "trafficrl/control/pi.hpp"
#include "trafficrl/env/demand.hpp"
#include "trafficrl/env/observation.hpp"
#include "trafficrl/seeds.hpp"
#include "trafficrl/traffic/model.hpp"

namespace trafficrl::env {

namespace tr = trafficrl::traffic;

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::NoControl: return "no_control";
    case Strategy::Fixed: return "fixed";
    case Strategy::Multi: return "multi";
    case Strategy::Single: return "single";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "no_control") return Strategy::NoControl;
  if (name == "fixed") return Strategy::Fixed;
  if (name == "multi") return Strategy::Multi;
  if (name == "single") return Strategy::Single;
  throw std::invalid_argument("unknown strategy: " + name);
}

double compute_reward(std::span<const double> tts,
                      std::span<const tr::Controls> controls_incl_prev,
                      const RewardConfig& cfg) {
  if (controls_incl_prev.size() != tts.size() + 1)
    throw std::invalid_argument("compute_reward: controls slice must have tts size + 1");
  double r = 0.0;
  for (std::size_t i = 0; i < tts.size(); ++i) {
    const auto& u1 = controls_incl_prev[i + 1];
    const auto& u0 = controls_incl_prev[i];
    const double d_dta = u1.u_dta - u0.u_dta;
    const double d_rm1 = u1.u_rm1 - u0.u_rm1;
    const double d_rm2 = u1.u_rm2 - u0.u_rm2;
    r -= cfg.w_tts * tts[i] + cfg.w_u * (d_dta * d_dta + d_rm1 * d_rm1 + d_rm2 * d_rm2);
  }
  return r;
}

namespace {

struct ControllerParams {
  control::DtaParams dta{};
  control::RmParams rm1{};
  control::RmParams rm2{};

  std::array<double, 8> flat() const {
    return {dta.k_p, dta.k_i, rm1.rho_bar, rm1.k_r, rm1.k_a, rm2.rho_bar, rm2.k_r, rm2.k_a};
  }
};

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& sc, const EpisodeOptions& opt,
                          std::span<rl::Agent* const> agents) {
  sc.validate();
  const bool rl_driven = opt.strategy == Strategy::Multi || opt.strategy == Strategy::Single;
  const std::size_t want_agents = opt.strategy == Strategy::Multi  ? 3
                                  : opt.strategy == Strategy::Single ? 1
                                                                     : 0;
  if (rl_driven && agents.size() != want_agents)
    throw std::invalid_argument("run_episode: strategy needs " + std::to_string(want_agents) +
                                " agents, got " + std::to_string(agents.size()));

  const auto& timing = sc.timing;
  const int steps = timing.steps();
  const int m_dta = timing.dta_every();
  const int m_rm = timing.rm_every();
  const int m_rl = timing.rl_every();
  const long first_noisy_step =
      static_cast<long>(std::ceil(sc.obs_noise.start_minute * 60.0 / timing.step_s - 1e-9));

  const DemandSeries demands = synthesize_demand(sc.demand, timing, opt.demand_seed);

  tr::NetworkState x = make_initial_state(sc.topology, sc.model, weather_schedule(sc, 0));

  control::DtaState dta_state;
  control::RmState rm1_state, rm2_state;
  ControllerParams params;
  switch (opt.strategy) {
    case Strategy::NoControl:
      // Zero gains freeze the controllers at their initial outputs.
      params = ControllerParams{{0.0, 0.0}, {sc.fixed.rm1.rho_bar, 0.0, 0.0},
                                {sc.fixed.rm2.rho_bar, 0.0, 0.0}};
      break;
    case Strategy::Fixed:
      params = ControllerParams{sc.fixed.dta, sc.fixed.rm1, sc.fixed.rm2};
      break;
    default:
      break;  // written by the agents at the first tuning boundary
  }

  std::mt19937_64 obs_rng(opt.obs_noise_seed);
  std::vector<std::mt19937_64> explore_rng, sample_rng;
  if (opt.training) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      explore_rng.emplace_back(mix_seed(opt.explore_seed, "explore", i));
      sample_rng.emplace_back(mix_seed(opt.sample_seed, "sample", i));
    }
  }

  EpisodeResult res;
  res.step_tts.reserve(steps);
  res.controls.reserve(steps);

  tr::Controls u;  // starts at the no-control values
  std::vector<tr::Controls> u_trace;
  u_trace.reserve(steps + 1);
  u_trace.push_back(u);

  std::vector<std::vector<double>> prev_obs(agents.size());
  std::vector<std::vector<double>> prev_raw(agents.size());

  auto make_snapshot = [&](long k) {
    EnvSnapshot s;
    const int demand_idx = static_cast<int>(std::min<long>(k, steps - 1));
    s.demand = demands[demand_idx];
    for (int o = 0; o < 3; ++o) s.queues[o] = x.origins[o].queue;
    s.dt_now = route_tts_difference(x, sc.topology, sc.model);
    s.dt_prev = dta_state.dt_prev;
    s.rho_b1_now = bottleneck_density(x, 1, sc.topology, sc.model);
    s.rho_b1_prev = rm1_state.rho_b_prev.value_or(s.rho_b1_now);
    s.rho_b2_now = bottleneck_density(x, 2, sc.topology, sc.model);
    s.rho_b2_prev = rm2_state.rho_b_prev.value_or(s.rho_b2_now);
    s.u_dta = u.u_dta;
    s.u_rm1 = u.u_rm1;
    s.u_rm2 = u.u_rm2;
    s.weather = static_cast<int>(weather_schedule(sc, k));
    return s;
  };

  auto observe = [&](long k) {
    const EnvSnapshot snap = make_snapshot(k);
    std::vector<std::vector<double>> obs(agents.size());
    if (opt.strategy == Strategy::Multi) {
      for (int i = 0; i < 3; ++i) {
        auto o = normalize(build_obs_multi(i + 1, snap), obs_scales_multi(i + 1, sc.scales));
        if (i == 0)
          apply_obs_noise(std::span(o.data(), kDtaBlockDim), opt.obs_noise_sigma, k,
                          first_noisy_step, obs_rng);
        obs[i] = std::move(o);
      }
    } else {
      auto o = normalize(build_obs_single(snap), obs_scales_single(sc.scales));
      apply_obs_noise(std::span(o.data(), kDtaBlockDim), opt.obs_noise_sigma, k,
                      first_noisy_step, obs_rng);
      obs[0] = std::move(o);
    }
    return obs;
  };

  auto interval_reward = [&](int j) {
    const std::size_t k0 = static_cast<std::size_t>(j) * m_rl;
    return compute_reward(std::span(res.step_tts).subspan(k0, m_rl),
                          std::span(u_trace).subspan(k0, m_rl + 1), sc.reward);
  };

  auto write_params = [&](std::span<const std::vector<double>> scaled) {
    if (opt.strategy == Strategy::Multi) {
      params.dta = {scaled[0][0], scaled[0][1]};
      params.rm1 = {scaled[1][0], scaled[1][1], scaled[1][2]};
      params.rm2 = {scaled[2][0], scaled[2][1], scaled[2][2]};
    } else {
      const auto& a = scaled[0];
      params.dta = {a[0], a[1]};
      params.rm1 = {a[2], a[3], a[4]};
      params.rm2 = {a[5], a[6], a[7]};
    }
  };

  auto store_and_train = [&](int j, const std::vector<std::vector<double>>& obs_now,
                             bool terminal) {
    const double r = interval_reward(j - 1);
    res.rewards.push_back(r);
    if (!opt.training) return;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      agents[i]->push_transition(
          rl::Transition{prev_obs[i], prev_raw[i], r, obs_now[i], terminal});
      if (agents[i]->can_train()) {
        try {
          res.train_stats.push_back(agents[i]->train_step(sample_rng[i]));
        } catch (const std::runtime_error& e) {
          throw std::runtime_error("tuning step " + std::to_string(j) + ": " + e.what());
        }
      }
    }
  };

  for (long k = 0; k < steps; ++k) {
    const tr::Weather w = weather_schedule(sc, k);

    if (rl_driven && k % m_rl == 0) {
      const int j = static_cast<int>(k / m_rl);
      const auto obs = observe(k);
      if (j > 0) store_and_train(j, obs, false);

      std::vector<std::vector<double>> scaled(agents.size());
      res.agent_actions.emplace_back(agents.size());
      for (std::size_t i = 0; i < agents.size(); ++i) {
        auto raw = agents[i]->act_raw(obs[i]);
        if (opt.training) raw = agents[i]->apply_exploration(std::move(raw), explore_rng[i]);
        scaled[i] = agents[i]->scale_action(raw);
        res.agent_actions.back()[i] = scaled[i];
        prev_obs[i] = obs[i];
        prev_raw[i] = std::move(raw);
      }
      write_params(scaled);
    }
    if (k % m_rl == 0) res.param_trace.push_back(params.flat());

    if (k % m_dta == 0) {
      const auto upd =
          control::pi_dta_update(dta_state, route_tts_difference(x, sc.topology, sc.model), params.dta);
      u.u_dta = upd.u;
      dta_state = upd.next;
    }
    if (k % m_rm == 0) {
      const auto upd1 =
          control::pi_alinea_update(rm1_state, bottleneck_density(x, 1, sc.topology, sc.model), params.rm1);
      u.u_rm1 = upd1.u;
      rm1_state = upd1.next;
      const auto upd2 =
          control::pi_alinea_update(rm2_state, bottleneck_density(x, 2, sc.topology, sc.model), params.rm2);
      u.u_rm2 = upd2.u;
      rm2_state = upd2.next;
    }

    x = step_network(x, u, demands[k], w, sc.topology, sc.model);
    res.step_tts.push_back(compute_step_tts(x, sc.topology, sc.model));
    res.controls.push_back(u);
    u_trace.push_back(u);
  }

  const int n_tuning = timing.tuning_steps();
  if (rl_driven) {
    const auto obs_end = observe(steps);
    store_and_train(n_tuning, obs_end, true);
  } else {
    for (int j = 0; j < n_tuning; ++j) res.rewards.push_back(interval_reward(j));
  }

  for (double t : res.step_tts) res.total_tts += t;
  return res;
}

}  // namespace trafficrl::env
