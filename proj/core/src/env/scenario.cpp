#include "trafficrl/env/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace trafficrl::env {

double PiecewiseLinear::at(double t) const {
  if (points.empty()) return 0.0;
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t <= points[i].first) {
      const auto& [t0, v0] = points[i - 1];
      const auto& [t1, v1] = points[i];
      const double f = (t - t0) / (t1 - t0);
      return v0 + f * (v1 - v0);
    }
  }
  return points.back().second;
}

void TimingConfig::validate() const {
  if (step_s <= 0.0) throw std::invalid_argument("timing: step_s must be > 0");
  auto multiple_of_step = [&](double period, const char* name) {
    const double ratio = period / step_s;
    if (period <= 0.0 || std::abs(ratio - std::round(ratio)) > 1e-9)
      throw std::invalid_argument(std::string("timing: ") + name +
                                  " must be a positive integer multiple of step_s");
  };
  multiple_of_step(dta_period_s, "dta_period_s");
  multiple_of_step(rm_period_s, "rm_period_s");
  multiple_of_step(rl_period_s, "rl_period_s");
  multiple_of_step(episode_s, "episode_s");
  auto multiple = [](double big, double small, const char* msg) {
    const double ratio = big / small;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) throw std::invalid_argument(msg);
  };
  multiple(rl_period_s, dta_period_s, "timing: rl_period_s must be a multiple of dta_period_s");
  multiple(rl_period_s, rm_period_s, "timing: rl_period_s must be a multiple of rm_period_s");
  multiple(episode_s, rl_period_s, "timing: episode_s must be a multiple of rl_period_s");
}

namespace {

PiecewiseLinear trapezoid(double low, double high, double rise_start_s, double rise_s,
                          double plateau_s, double fall_s) {
  PiecewiseLinear p;
  p.points = {{0.0, low},
              {rise_start_s, low},
              {rise_start_s + rise_s, high},
              {rise_start_s + rise_s + plateau_s, high},
              {rise_start_s + rise_s + plateau_s + fall_s, low}};
  return p;
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig sc;
  // Demand plateaus span the weather switch. Rates are sized so that each
  // route's ramp-merge segment is the binding bottleneck once bad weather
  // halves the critical density: the mainstream stays under its own
  // bad-weather capacity while merge demand exceeds it, which is the regime
  // where metering and routing have authority.
  const double rise_start = 1800.0, rise = 1800.0, plateau = 9000.0, fall = 1800.0;
  sc.demand.base[traffic::kOriginMain][0] = trapezoid(1000.0, 1800.0, rise_start, rise, plateau, fall);
  sc.demand.base[traffic::kOriginMain][1] = trapezoid(150.0, 270.0, rise_start, rise, plateau, fall);
  for (int o : {traffic::kOriginRamp1, traffic::kOriginRamp2}) {
    sc.demand.base[o][0] = trapezoid(200.0, 1500.0, rise_start, rise, plateau, fall);
    sc.demand.base[o][1] = trapezoid(20.0, 150.0, rise_start, rise, plateau, fall);
  }
  return sc;
}

void ScenarioConfig::validate() const {
  model.validate();
  topology.validate();
  timing.validate();
  if (std::abs(model.step_s - timing.step_s) > 1e-12)
    throw std::invalid_argument("scenario: model.step_s and timing.step_s must agree");
  if (reward.w_tts < 0.0 || reward.w_u < 0.0)
    throw std::invalid_argument("reward: weights must be >= 0");
  if (!(demand.butter_cutoff > 0.0 && demand.butter_cutoff < 1.0))
    throw std::invalid_argument("demand: butter_cutoff must be in (0,1)");
  for (double s : demand.noise_std)
    if (s < 0.0) throw std::invalid_argument("demand: noise_std must be >= 0");
  for (double s : {scales.demand, scales.queue, scales.density, scales.dt, scales.u, scales.w})
    if (s <= 0.0) throw std::invalid_argument("scales: must be > 0");
  if (weather_switch_minute < 0.0)
    throw std::invalid_argument("weather_switch_minute must be >= 0");
  if (obs_noise.start_minute < 0.0)
    throw std::invalid_argument("obs_noise.start_minute must be >= 0");
}

traffic::Weather weather_schedule(const ScenarioConfig& sc, long k) {
  const double t = static_cast<double>(k) * sc.timing.step_s;
  return t < sc.weather_switch_minute * 60.0 ? traffic::Weather::Good : traffic::Weather::Bad;
}

}  // namespace trafficrl::env
