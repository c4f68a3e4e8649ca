#pragma once

#include <array>
#include <span>
#include <vector>

namespace trafficrl::env {

/// Third-order low-pass Butterworth filter, digitized with the bilinear
/// transform. `cutoff` is a fraction of the Nyquist frequency in (0,1).
struct Butterworth3 {
  std::array<double, 4> b{};
  std::array<double, 4> a{};  // normalized, a[0] == 1

  static Butterworth3 design(double cutoff);
};

/// Direct-form-II-transposed filtering. The delay line starts at the steady
/// state of the first sample, so a constant input passes through unchanged
/// (unit DC gain, no startup dip).
std::vector<double> lowpass_filter(const Butterworth3& f, std::span<const double> x);

}  // namespace trafficrl::env
