#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trafficrl::bench {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);  // 0 for fewer than 2 values

/// Trailing moving average; the first window-1 entries average the
/// available prefix. Throws on an empty series or window < 1.
std::vector<double> smooth_curve(std::span<const double> series, int window = 40);

/// Index whose mean is closest to the grand mean; ties go to the lowest
/// index. Throws on an empty list.
std::size_t select_representative(std::span<const double> means);

struct RunRecord {
  std::string strategy;
  int run = 0;
  std::uint64_t seed = 0;
  double tts = 0.0;
};

struct StrategySummary {
  std::string strategy;
  double mean_tts = 0.0;
  double std_tts = 0.0;
  int runs = 0;
};

struct RobustnessRow {
  double sigma = 0.0;
  std::string framework;
  double mean_tts = 0.0;
  double std_tts = 0.0;
  int runs = 0;
};

/// CSV writers. Every file starts with a `# generated <timestamp>` metadata
/// comment; all remaining bytes are deterministic. Doubles are emitted with
/// 17 significant digits so values round-trip exactly.
void write_summary_csv(const std::string& path, std::span<const StrategySummary> rows,
                       std::span<const std::string> metadata = {});
void write_runs_csv(const std::string& path, std::span<const RunRecord> rows,
                    std::span<const std::string> metadata = {});
void write_robustness_csv(const std::string& path, std::span<const RobustnessRow> rows,
                          std::span<const std::string> metadata = {});
void write_curve_csv(const std::string& path, std::span<const double> values,
                     const std::string& value_name,
                     std::span<const std::string> metadata = {});

/// Minimal SVG line plot of the raw series with its smoothed overlay.
void write_curve_svg(const std::string& path, std::span<const double> raw,
                     std::span<const double> smoothed, const std::string& title);

std::string format_double(double v);  // %.17g

}  // namespace trafficrl::bench
