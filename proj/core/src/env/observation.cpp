#include "trafficrl/env/observation.hpp"

#include <algorithm>
#include <stdexcept>

namespace trafficrl::env {

std::vector<double> build_obs_multi(int agent, const EnvSnapshot& s) {
  if (agent < 1 || agent > 3) throw std::invalid_argument("build_obs_multi: agent must be 1..3");
  const int o = agent - 1;  // agent i observes origin O_{i-1}
  std::vector<double> obs;
  obs.reserve(kObsDimMulti);
  obs.push_back(s.demand[o][0]);
  obs.push_back(s.demand[o][1]);
  obs.push_back(s.queues[o][0]);
  obs.push_back(s.queues[o][1]);
  switch (agent) {
    case 1:
      obs.push_back(s.dt_now);
      obs.push_back(s.dt_prev);
      obs.push_back(s.u_dta);
      break;
    case 2:
      obs.push_back(s.rho_b1_now);
      obs.push_back(s.rho_b1_prev);
      obs.push_back(s.u_rm1);
      break;
    default:
      obs.push_back(s.rho_b2_now);
      obs.push_back(s.rho_b2_prev);
      obs.push_back(s.u_rm2);
      break;
  }
  obs.push_back(static_cast<double>(s.weather));
  return obs;
}

std::vector<double> build_obs_single(const EnvSnapshot& s) {
  std::vector<double> obs;
  obs.reserve(kObsDimSingle);
  for (int agent = 1; agent <= 3; ++agent) {
    auto block = build_obs_multi(agent, s);
    obs.insert(obs.end(), block.begin(), block.end() - 1);  // drop per-agent w
  }
  obs.push_back(static_cast<double>(s.weather));
  return obs;
}

std::vector<double> obs_scales_multi(int agent, const ObservationScales& sc) {
  const double meas = (agent == 1) ? sc.dt : sc.density;
  return {sc.demand, sc.demand, sc.queue, sc.queue, meas, meas, sc.u, sc.w};
}

std::vector<double> obs_scales_single(const ObservationScales& sc) {
  std::vector<double> scales;
  scales.reserve(kObsDimSingle);
  for (int agent = 1; agent <= 3; ++agent) {
    auto block = obs_scales_multi(agent, sc);
    scales.insert(scales.end(), block.begin(), block.end() - 1);
  }
  scales.push_back(sc.w);
  return scales;
}

std::vector<double> normalize(std::span<const double> obs, std::span<const double> scales) {
  if (obs.size() != scales.size())
    throw std::invalid_argument("normalize: obs/scales size mismatch");
  std::vector<double> out(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) out[i] = obs[i] / scales[i];
  return out;
}

void apply_obs_noise(std::span<double> dta_block, double sigma, long k, long first_noisy_step,
                     std::mt19937_64& rng) {
  if (sigma < 0.0) throw std::invalid_argument("apply_obs_noise: sigma must be >= 0");
  if (sigma == 0.0 || k < first_noisy_step) return;
  std::normal_distribution<double> alpha(0.0, sigma);
  for (auto& v : dta_block) {
    const double eta = 1.0 + std::clamp(alpha(rng), -100.0, 100.0) / 100.0;
    v *= eta;
  }
}

}  // namespace trafficrl::env
