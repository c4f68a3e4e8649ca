#include "trafficrl/bench/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace trafficrl::bench {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

std::vector<double> smooth_curve(std::span<const double> series, int window) {
  if (series.empty()) throw std::invalid_argument("smooth_curve: empty series");
  if (window < 1) throw std::invalid_argument("smooth_curve: window must be >= 1");
  std::vector<double> out(series.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    acc += series[i];
    if (i >= static_cast<std::size_t>(window)) acc -= series[i - window];
    const std::size_t n = std::min<std::size_t>(i + 1, window);
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

std::size_t select_representative(std::span<const double> means) {
  if (means.empty()) throw std::invalid_argument("select_representative: no candidates");
  const double grand = mean(means);
  std::size_t best = 0;
  double best_dist = std::abs(means[0] - grand);
  for (std::size_t i = 1; i < means.size(); ++i) {
    const double d = std::abs(means[i] - grand);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_csv(const std::string& path, std::span<const std::string> metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  out << "# generated " << stamp << '\n';
  for (const auto& m : metadata) out << "# " << m << '\n';
  return out;
}

}  // namespace

void write_summary_csv(const std::string& path, std::span<const StrategySummary> rows,
                       std::span<const std::string> metadata) {
  auto out = open_csv(path, metadata);
  out << "strategy,mean_tts,std_tts,runs\n";
  for (const auto& r : rows)
    out << r.strategy << ',' << format_double(r.mean_tts) << ',' << format_double(r.std_tts)
        << ',' << r.runs << '\n';
}

void write_runs_csv(const std::string& path, std::span<const RunRecord> rows,
                    std::span<const std::string> metadata) {
  auto out = open_csv(path, metadata);
  out << "strategy,run,seed,tts\n";
  for (const auto& r : rows)
    out << r.strategy << ',' << r.run << ',' << r.seed << ',' << format_double(r.tts) << '\n';
}

void write_robustness_csv(const std::string& path, std::span<const RobustnessRow> rows,
                          std::span<const std::string> metadata) {
  auto out = open_csv(path, metadata);
  out << "sigma,framework,mean_tts,std_tts,runs\n";
  for (const auto& r : rows)
    out << format_double(r.sigma) << ',' << r.framework << ',' << format_double(r.mean_tts)
        << ',' << format_double(r.std_tts) << ',' << r.runs << '\n';
}

void write_curve_csv(const std::string& path, std::span<const double> values,
                     const std::string& value_name, std::span<const std::string> metadata) {
  auto out = open_csv(path, metadata);
  out << "episode," << value_name << '\n';
  for (std::size_t i = 0; i < values.size(); ++i)
    out << i << ',' << format_double(values[i]) << '\n';
}

void write_curve_svg(const std::string& path, std::span<const double> raw,
                     std::span<const double> smoothed, const std::string& title) {
  if (raw.empty()) throw std::invalid_argument("write_curve_svg: empty series");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  const int width = 900, height = 420, margin = 50;
  double lo = raw[0], hi = raw[0];
  for (double v : raw) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : smoothed) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) hi = lo + 1.0;

  auto px = [&](std::size_t i, std::size_t n) {
    return margin + (width - 2.0 * margin) * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.5);
  };
  auto py = [&](double v) { return height - margin - (height - 2.0 * margin) * (v - lo) / (hi - lo); };
  auto polyline = [&](std::span<const double> ys, const char* color, double op) {
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-opacity=\"" << op
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(i, ys.size()), py(ys[i]));
      out << buf;
    }
    out << "\"/>\n";
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << margin << "\" y=\"" << height - margin + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(lo) << "</text>\n";
  out << "  <text x=\"" << margin << "\" y=\"" << margin - 6
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(hi) << "</text>\n";
  polyline(raw, "#9e9e9e", 0.6);
  if (!smoothed.empty()) polyline(smoothed, "#1565c0", 1.0);
  out << "</svg>\n";
}

}  // namespace trafficrl::bench
