#include "trafficrl/env/demand.hpp"

#include <algorithm>
#include <random>

#include "trafficrl/env/butterworth.hpp"

namespace trafficrl::env {

DemandSeries synthesize_demand(const DemandProfile& profile, const TimingConfig& timing,
                               std::uint64_t seed) {
  const int n = timing.steps();
  const auto filter = Butterworth3::design(profile.butter_cutoff);
  std::mt19937_64 rng(seed);

  DemandSeries out(n);
  std::vector<double> series(n);
  for (int o = 0; o < 3; ++o) {
    for (int c = 0; c < traffic::kNumClasses; ++c) {
      for (int k = 0; k < n; ++k) series[k] = profile.base[o][c].at(k * timing.step_s);
      if (profile.noise_std[o] > 0.0) {
        std::normal_distribution<double> noise(0.0, profile.noise_std[o]);
        for (auto& v : series) v += noise(rng);
      }
      const auto filtered = lowpass_filter(filter, series);
      for (int k = 0; k < n; ++k) out[k][o][c] = std::max(0.0, filtered[k]);
    }
  }
  return out;
}

}  // namespace trafficrl::env
