#pragma once

#include <array>

namespace trafficrl::traffic {

/// Link roles in the fixed three-link layout: one mainstream link feeding a
/// diverge, and two parallel route links that end at the destination.
enum LinkId : int { kMain = 0, kPrimary = 1, kSecondary = 2 };

/// Origin roles: O0 feeds the mainstream, O1/O2 are the route on-ramps.
enum OriginId : int { kOriginMain = 0, kOriginRamp1 = 1, kOriginRamp2 = 2 };

struct LinkSpec {
  int segments = 0;
  int lanes = 0;
  int ramp_segment = -1;        // segment fed by the on-ramp, -1 if none
  int bottleneck_segment = -1;  // density measurement segment, -1 if none
};

struct Topology {
  std::array<LinkSpec, 3> links{};
  int ramp_lanes = 1;

  const LinkSpec& main() const { return links[kMain]; }
  const LinkSpec& route(int r) const { return links[r == 1 ? kPrimary : kSecondary]; }

  /// Smallest layout with a ramp-downstream bottleneck on each route:
  /// 2-segment mainstream, 4-segment routes, ramp into the 2nd route
  /// segment, bottleneck measured at the 3rd.
  static Topology defaults();

  /// Throws std::invalid_argument on structural violations.
  void validate() const;
};

}  // namespace trafficrl::traffic
