#pragma once

#include <array>

#include "trafficrl/traffic/params.hpp"
#include "trafficrl/traffic/state.hpp"
#include "trafficrl/traffic/topology.hpp"

namespace trafficrl::traffic {

/// PCE-weighted density shared by both classes [veh/km/lane].
double effective_density(const SegmentState& seg, const ModelParams& p);

/// Fundamental diagram V(rho) = v_free * exp(-(1/a) * (rho/rho_cr)^a),
/// floored at v_min.
double equilibrium_speed(double rho_eff, const VehicleClassParams& cls, double v_min);

/// Per-class origin outflow [veh/h]. `capacity_veh_h` is the origin's total
/// capacity C_o * lambda_o; `r` is the metering rate (1 for unmetered
/// origins). The flow is the least of queue-plus-demand discharge, the
/// metered capacity, and the downstream supply.
std::array<double, kNumClasses> origin_outflow(const OriginState& o, double r,
                                               const SegmentState& downstream,
                                               const ModelParams& p, Weather w,
                                               double capacity_veh_h);

/// Advances the network one step of length T. Throws std::invalid_argument
/// on non-finite controls or demands.
NetworkState step_network(const NetworkState& x, const Controls& u, const Demands& d,
                          Weather w, const Topology& topo, const ModelParams& p);

/// Flow leaving the network at the destination during step k, per class
/// [veh/h], computed from the same state the step update uses.
std::array<double, kNumClasses> destination_outflow(const NetworkState& x,
                                                    const Topology& topo);

/// TTS contribution of one step: T * (vehicles on segments + queued) [veh*h].
double compute_step_tts(const NetworkState& x, const Topology& topo, const ModelParams& p);

/// Instantaneous TTS contribution of the primary route (its segments plus
/// its ramp queue) minus the secondary's [veh*h].
double route_tts_difference(const NetworkState& x, const Topology& topo, const ModelParams& p);

/// Effective density at the configured bottleneck segment of route 1 or 2.
double bottleneck_density(const NetworkState& x, int route, const Topology& topo,
                          const ModelParams& p);

}  // namespace trafficrl::traffic
