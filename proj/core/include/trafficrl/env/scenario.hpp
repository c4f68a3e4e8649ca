#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "trafficrl/control/pi.hpp"
#include "trafficrl/traffic/params.hpp"
#include "trafficrl/traffic/topology.hpp"

namespace trafficrl::env {

/// Piecewise-linear curve over time [s]; constant extrapolation outside the
/// breakpoint range.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> points;  // (t_seconds, value), ascending t

  double at(double t) const;
};

struct DemandProfile {
  // [origin][class] base demand [veh/h]
  std::array<std::array<PiecewiseLinear, traffic::kNumClasses>, 3> base;
  std::array<double, 3> noise_std{75.0, 30.0, 30.0};  // [veh/h] per origin
  double butter_cutoff = 0.02;                        // fraction of Nyquist
};

/// The three-rate hierarchy: simulation step, controller periods, tuning
/// period. All periods must be integer multiples of the simulation step and
/// the tuning period a multiple of each controller period.
struct TimingConfig {
  double step_s = 10.0;
  double dta_period_s = 300.0;
  double rm_period_s = 60.0;
  double rl_period_s = 1800.0;
  double episode_s = 19800.0;

  int steps() const { return static_cast<int>(episode_s / step_s + 0.5); }
  int dta_every() const { return static_cast<int>(dta_period_s / step_s + 0.5); }
  int rm_every() const { return static_cast<int>(rm_period_s / step_s + 0.5); }
  int rl_every() const { return static_cast<int>(rl_period_s / step_s + 0.5); }
  int tuning_steps() const { return steps() / rl_every(); }

  void validate() const;
};

struct RewardConfig {
  double w_tts = 3.33e-4;  // [1/(veh*h)]
  double w_u = 2.22e-5;
};

struct FixedControllerParams {
  control::DtaParams dta{0.01, 0.005};
  control::RmParams rm1{37.5, 0.005, 0.1};
  control::RmParams rm2{37.5, 0.005, 0.1};
};

/// Divisors bringing each observation feature to order one.
struct ObservationScales {
  double demand = 2000.0;
  double queue = 100.0;
  double density = 180.0;
  double dt = 10.0;
  double u = 1.0;
  double w = 1.0;
};

struct DdpgConfig {
  std::vector<int> hidden{64, 64};
  double gamma = 0.99;
  double lr = 0.001;
  double soft_update = 0.01;
  std::size_t buffer = 10000;
  int batch = 64;
  double noise_std = 0.3;
  double noise_decay = 5e-5;
  double noise_floor = 0.01;
};

struct ObsNoiseConfig {
  double start_minute = 30.0;  // multiplicative failure noise starts here
};

/// Everything one experiment needs: network, dynamics constants, demand,
/// timing, reward, controller and learner settings.
struct ScenarioConfig {
  traffic::ModelParams model;
  traffic::Topology topology = traffic::Topology::defaults();
  TimingConfig timing;
  RewardConfig reward;
  DemandProfile demand;
  ObservationScales scales;
  FixedControllerParams fixed;
  DdpgConfig ddpg;
  ObsNoiseConfig obs_noise;
  double weather_switch_minute = 166.0;
  std::string out_dir = "out";

  static ScenarioConfig defaults();
  void validate() const;
};

/// Good before the switch minute, bad afterwards.
traffic::Weather weather_schedule(const ScenarioConfig& sc, long k);

}  // namespace trafficrl::env
