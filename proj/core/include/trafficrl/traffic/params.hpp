#pragma once

#include <array>
#include <stdexcept>

namespace trafficrl::traffic {

inline constexpr int kNumClasses = 2;

enum class Weather : int { Good = 0, Bad = 1 };

/// Weather-resolved fundamental-diagram parameters of one vehicle class.
struct VehicleClassParams {
  double rho_cr;  // critical density [veh/km/lane]
  double v_free;  // free-flow speed [km/h]
  double a_m;     // speed-function exponent
  double pce;     // passenger-car-equivalent factor
};

/// Full model parameter set: weather-dependent class tables plus the
/// weather-independent constants. Defaults give the two-class freeway setup.
struct ModelParams {
  // [weather][class]
  std::array<std::array<double, kNumClasses>, 2> rho_cr{{{40.0, 32.65}, {24.0, 16.65}}};
  std::array<std::array<double, kNumClasses>, 2> v_free{{{110.0, 86.5}, {92.0, 61.4}}};
  std::array<double, 2> tau_s{18.0, 21.6};  // relaxation time [s] per weather

  std::array<double, kNumClasses> a_m{1.8, 2.0};
  std::array<double, kNumClasses> pce{1.0, 1.225};

  double nu = 60.0;        // anticipation coefficient [km^2/h]
  double chi = 40.0;       // anticipation damping density [veh/km/lane]
  double delta = 0.0122;   // on-ramp merge speed-drop coefficient
  double rho_max = 180.0;  // jam density [veh/km/lane]
  double c_main = 2000.0;  // mainstream capacity [veh/h/lane]
  double c_onramp = 2000.0;  // on-ramp capacity [veh/h/lane]

  double segment_length_m = 1000.0;  // [m]
  double step_s = 10.0;              // simulation step [s]
  double v_min = 7.0;                // numerical speed floor [km/h]

  double step_h() const { return step_s / 3600.0; }
  double segment_km() const { return segment_length_m / 1000.0; }
  double tau(Weather w) const { return tau_s[static_cast<int>(w)]; }

  VehicleClassParams class_params(Weather w, int cls) const {
    const int wi = static_cast<int>(w);
    return {rho_cr[wi][cls], v_free[wi][cls], a_m[cls], pce[cls]};
  }

  /// Throws if any value violates the model's validity constraints.
  void validate() const;
};

/// Per-weather lookup bundle: the class parameter rows plus tau.
struct WeatherParams {
  std::array<VehicleClassParams, kNumClasses> cls;
  double tau_s;
};

WeatherParams weather_params(const ModelParams& p, Weather w);

}  // namespace trafficrl::traffic
