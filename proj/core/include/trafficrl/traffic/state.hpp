#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trafficrl/traffic/params.hpp"
#include "trafficrl/traffic/topology.hpp"

namespace trafficrl::traffic {

struct SegmentState {
  std::array<double, kNumClasses> rho{0.0, 0.0};  // density [veh/km/lane]
  std::array<double, kNumClasses> v{0.0, 0.0};    // speed [km/h]
};

struct OriginState {
  std::array<double, kNumClasses> queue{0.0, 0.0};   // [veh]
  std::array<double, kNumClasses> demand{0.0, 0.0};  // current demand [veh/h]
};

/// Full network state x(k): per-link segment states, the three origin
/// queues, and the step counter.
struct NetworkState {
  std::array<std::vector<SegmentState>, 3> links;
  std::array<OriginState, 3> origins;
  std::int64_t step = 0;
};

/// Control inputs applied during one simulation step, all in [0,1].
struct Controls {
  double u_dta = 0.5;
  double u_rm1 = 1.0;
  double u_rm2 = 1.0;
};

/// Demands per origin and class [veh/h].
using Demands = std::array<std::array<double, kNumClasses>, 3>;

/// Empty network: zero densities and queues, speeds at the free-flow value
/// for the given weather.
NetworkState make_initial_state(const Topology& topo, const ModelParams& p, Weather w);

/// Vehicles currently stored in segments and queues [veh].
double stored_vehicles(const NetworkState& x, const Topology& topo, const ModelParams& p);

}  // namespace trafficrl::traffic
