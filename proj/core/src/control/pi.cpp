#include "trafficrl/control/pi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trafficrl::control {

double clamp_control(double u) { return std::clamp(u, 0.0, 1.0); }

DtaUpdate pi_dta_update(const DtaState& s, double dt_now, const DtaParams& p) {
  if (!std::isfinite(dt_now)) throw std::invalid_argument("pi_dta_update: non-finite dt");
  const double raw = s.u_prev + p.k_p * (dt_now - s.dt_prev) + p.k_i * dt_now;
  const double u = clamp_control(raw);
  return {u, DtaState{u, dt_now}};
}

RmUpdate pi_alinea_update(const RmState& s, double rho_b, const RmParams& p) {
  if (!std::isfinite(rho_b)) throw std::invalid_argument("pi_alinea_update: non-finite rho_b");
  const double rho_prev = s.rho_b_prev.value_or(rho_b);
  const double raw = s.u_prev + p.k_r * (p.rho_bar - rho_b) - p.k_a * (rho_b - rho_prev);
  const double u = clamp_control(raw);
  return {u, RmState{u, rho_b}};
}

}  // namespace trafficrl::control
