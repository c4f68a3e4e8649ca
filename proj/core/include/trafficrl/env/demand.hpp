#pragma once

#include <cstdint>
#include <vector>

#include "trafficrl/env/scenario.hpp"
#include "trafficrl/traffic/state.hpp"

namespace trafficrl::env {

using DemandSeries = std::vector<traffic::Demands>;

/// Samples the base profiles at the simulation step, perturbs each
/// origin/class series with i.i.d. zero-mean Gaussian noise of the origin's
/// standard deviation, low-pass filters the result, and clamps at zero.
/// Pure function of (profile, timing, seed).
DemandSeries synthesize_demand(const DemandProfile& profile, const TimingConfig& timing,
                               std::uint64_t seed);

}  // namespace trafficrl::env
