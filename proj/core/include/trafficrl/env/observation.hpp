#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "trafficrl/env/scenario.hpp"
#include "trafficrl/traffic/state.hpp"

namespace trafficrl::env {

inline constexpr int kObsDimMulti = 8;    // d (2), q (2), two measurements, u, w
inline constexpr int kObsDimSingle = 22;  // three 7-feature blocks plus w
inline constexpr int kDtaBlockDim = 7;    // the failure-noise target block

/// Everything the agents observe at a tuning boundary. Measurement history
/// (dt_prev, rho_b*_prev) comes from the controllers' own stored state.
struct EnvSnapshot {
  traffic::Demands demand{};                                  // d(k) [veh/h]
  std::array<std::array<double, traffic::kNumClasses>, 3> queues{};  // [veh]
  double dt_now = 0.0, dt_prev = 0.0;                         // [veh*h]
  double rho_b1_now = 0.0, rho_b1_prev = 0.0;                 // [veh/km/lane]
  double rho_b2_now = 0.0, rho_b2_prev = 0.0;
  double u_dta = 0.5, u_rm1 = 1.0, u_rm2 = 1.0;
  int weather = 0;
};

/// o_i for agent 1, 2 or 3 (route guidance, ramp 1, ramp 2), unnormalized.
std::vector<double> build_obs_multi(int agent, const EnvSnapshot& s);

/// The centralized 22-feature observation: the three per-agent blocks
/// without their weather entries, then the weather indicator last.
std::vector<double> build_obs_single(const EnvSnapshot& s);

std::vector<double> obs_scales_multi(int agent, const ObservationScales& sc);
std::vector<double> obs_scales_single(const ObservationScales& sc);

/// Elementwise division by the feature scales.
std::vector<double> normalize(std::span<const double> obs, std::span<const double> scales);

/// Multiplies each element by eta = 1 + clip(alpha, -100, 100)/100 with
/// alpha ~ N(0, sigma^2), emulating a partial sensor failure. Identity when
/// sigma == 0 or before `first_noisy_step`; no randomness is consumed then.
void apply_obs_noise(std::span<double> dta_block, double sigma, long k, long first_noisy_step,
                     std::mt19937_64& rng);

}  // namespace trafficrl::env
