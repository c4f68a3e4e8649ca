#include "trafficrl/env/butterworth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trafficrl::env {

Butterworth3 Butterworth3::design(double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw std::invalid_argument("butterworth: cutoff must be in (0,1) of Nyquist");
  // Analog prototype 1/(s^3 + 2s^2 + 2s + 1) with s = c*(1-z^-1)/(1+z^-1),
  // prewarped so the -3 dB point lands on the requested digital frequency.
  const double c = 1.0 / std::tan(std::numbers::pi * cutoff / 2.0);
  const double c2 = c * c;
  const double c3 = c2 * c;
  const double a0 = c3 + 2.0 * c2 + 2.0 * c + 1.0;

  Butterworth3 f;
  f.b = {1.0 / a0, 3.0 / a0, 3.0 / a0, 1.0 / a0};
  f.a = {1.0,
         (-3.0 * c3 - 2.0 * c2 + 2.0 * c + 3.0) / a0,
         (3.0 * c3 - 2.0 * c2 - 2.0 * c + 3.0) / a0,
         (-c3 + 2.0 * c2 - 2.0 * c + 1.0) / a0};
  return f;
}

std::vector<double> lowpass_filter(const Butterworth3& f, std::span<const double> x) {
  std::vector<double> y(x.size());
  if (x.empty()) return y;

  // Steady-state delay line for x[0] (DC gain is 1, so y* = x[0]).
  const double x0 = x.front();
  double z3 = (f.b[3] - f.a[3]) * x0;
  double z2 = (f.b[2] - f.a[2]) * x0 + z3;
  double z1 = (f.b[1] - f.a[1]) * x0 + z2;

  for (std::size_t n = 0; n < x.size(); ++n) {
    const double yn = f.b[0] * x[n] + z1;
    z1 = f.b[1] * x[n] - f.a[1] * yn + z2;
    z2 = f.b[2] * x[n] - f.a[2] * yn + z3;
    z3 = f.b[3] * x[n] - f.a[3] * yn;
    y[n] = yn;
  }
  return y;
}

}  // namespace trafficrl::env
