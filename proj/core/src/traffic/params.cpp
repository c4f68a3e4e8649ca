#include "trafficrl/traffic/params.hpp"

#include <stdexcept>

#include "trafficrl/traffic/topology.hpp"

namespace trafficrl::traffic {

void ModelParams::validate() const {
  if (step_s <= 0.0) throw std::invalid_argument("model: step_s must be > 0");
  if (segment_length_m <= 0.0) throw std::invalid_argument("model: segment_length_m must be > 0");
  if (v_min <= 0.0) throw std::invalid_argument("model: v_min must be > 0");
  for (int w = 0; w < 2; ++w) {
    if (tau_s[w] <= 0.0) throw std::invalid_argument("model: tau must be > 0");
    for (int c = 0; c < kNumClasses; ++c) {
      if (rho_cr[w][c] <= 0.0) throw std::invalid_argument("model: rho_cr must be > 0");
      if (v_free[w][c] <= 0.0) throw std::invalid_argument("model: v_free must be > 0");
      if (rho_max <= rho_cr[w][c])
        throw std::invalid_argument("model: rho_max must exceed every rho_cr");
    }
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (a_m[c] <= 0.0) throw std::invalid_argument("model: a_m must be > 0");
    if (pce[c] <= 0.0) throw std::invalid_argument("model: pce must be > 0");
  }
}

WeatherParams weather_params(const ModelParams& p, Weather w) {
  WeatherParams out{};
  for (int c = 0; c < kNumClasses; ++c) out.cls[c] = p.class_params(w, c);
  out.tau_s = p.tau(w);
  return out;
}

Topology Topology::defaults() {
  Topology t;
  t.links[kMain] = LinkSpec{2, 2, -1, -1};
  t.links[kPrimary] = LinkSpec{4, 2, 1, 2};
  t.links[kSecondary] = LinkSpec{4, 2, 1, 2};
  t.ramp_lanes = 1;
  return t;
}

void Topology::validate() const {
  for (const auto& l : links) {
    if (l.segments < 1) throw std::invalid_argument("topology: link needs >= 1 segment");
    if (l.lanes < 1) throw std::invalid_argument("topology: link needs >= 1 lane");
  }
  if (ramp_lanes < 1) throw std::invalid_argument("topology: ramp needs >= 1 lane");
  for (int r : {kPrimary, kSecondary}) {
    const auto& l = links[r];
    if (l.ramp_segment < 0 || l.ramp_segment >= l.segments)
      throw std::invalid_argument("topology: route ramp_segment out of range");
    if (l.bottleneck_segment < 0 || l.bottleneck_segment >= l.segments)
      throw std::invalid_argument("topology: route bottleneck_segment out of range");
    if (l.bottleneck_segment <= l.ramp_segment)
      throw std::invalid_argument("topology: bottleneck must be downstream of the ramp");
  }
  if (links[kPrimary].segments != links[kSecondary].segments)
    throw std::invalid_argument("topology: route links must have equal segment counts");
}

}  // namespace trafficrl::traffic
