#pragma once

#include <optional>

namespace trafficrl::control {

/// Gains of the PI route-guidance law.
struct DtaParams {
  double k_p = 0.0;  // proportional gain [1/(veh*h)]
  double k_i = 0.0;  // integral gain [1/(veh*h)]
};

/// Parameters of the PI ramp-metering law.
struct RmParams {
  double rho_bar = 37.5;  // desired bottleneck density [veh/km/lane]
  double k_r = 0.0;       // regulation gain [lane*km/veh]
  double k_a = 0.0;       // anticipation gain [lane*km/veh]
};

/// Memory of the route-guidance controller: the last applied split and the
/// travel-burden difference measured at the last update.
struct DtaState {
  double u_prev = 0.5;
  double dt_prev = 0.0;
};

/// Memory of a ramp-metering controller. The previous bottleneck density is
/// unset until the first update, which then uses the current measurement.
struct RmState {
  double u_prev = 1.0;
  std::optional<double> rho_b_prev;
};

double clamp_control(double u);

struct DtaUpdate {
  double u;
  DtaState next;
};

struct RmUpdate {
  double u;
  RmState next;
};

/// u = clamp(u_prev + K_P*(dt - dt_prev) + K_I*dt, 0, 1). The clamped output
/// is what the next state memorizes. Throws on non-finite dt_now.
DtaUpdate pi_dta_update(const DtaState& s, double dt_now, const DtaParams& p);

/// u = clamp(u_prev + K_R*(rho_bar - rho_b) - K_A*(rho_b - rho_b_prev), 0, 1).
/// Throws on non-finite rho_b.
RmUpdate pi_alinea_update(const RmState& s, double rho_b, const RmParams& p);

}  // namespace trafficrl::control
