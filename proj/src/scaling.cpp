#include "dfadma/scaling.hpp"

#include <algorithm>
#include <string>

namespace dfadma {
namespace {

constexpr double kRssTieTolerance = 1e-12;

LineFit<double> log_log_fit(const FluctuationFunction& f, std::size_t first, std::size_t count) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(count));
  Eigen::VectorXd y(static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k) {
    x(static_cast<Eigen::Index>(k)) = std::log(static_cast<double>(f.scales[first + k]));
    y(static_cast<Eigen::Index>(k)) = std::log(f.F(static_cast<Eigen::Index>(first + k)));
  }
  return least_squares_line(x, y);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

ScalingFit fit_power_law(const FluctuationFunction& f, ScaleRange range) {
  const auto begin = std::lower_bound(f.scales.begin(), f.scales.end(), range.lo);
  const auto end = std::upper_bound(f.scales.begin(), f.scales.end(), range.hi);
  const auto count = end > begin ? static_cast<std::size_t>(end - begin) : 0;
  if (count < 2)
    throw InsufficientDataError("power-law fit needs at least 2 scales in [" +
                                std::to_string(range.lo) + ", " + std::to_string(range.hi) + "]");
  const auto first = static_cast<std::size_t>(begin - f.scales.begin());
  for (std::size_t k = first; k < first + count; ++k) {
    if (!positive_finite(f.F(static_cast<Eigen::Index>(k))))
      throw DegenerateInputError("fluctuation F(" + std::to_string(f.scales[k]) +
                                 ") is not positive; log-log fit undefined");
  }
  const auto line = log_log_fit(f, first, count);
  ScalingFit fit;
  fit.H = line.slope;
  fit.std_error = line.slope_stderr;
  fit.intercept = line.intercept;
  fit.rss = line.rss;
  fit.range = {f.scales[first], f.scales[first + count - 1]};
  fit.n_points = static_cast<Eigen::Index>(count);
  return fit;
}

std::vector<WindowScan> scan_fitting_windows(const FluctuationFunction& f, int window_len) {
  if (window_len < 2) throw ConfigError("fitting window must hold at least 2 points");
  const auto len = static_cast<std::size_t>(window_len);
  std::vector<WindowScan> out;
  if (f.scales.size() < len) return out;
  for (std::size_t first = 0; first + len <= f.scales.size(); ++first) {
    WindowScan w;
    w.range = {f.scales[first], f.scales[first + len - 1]};
    w.usable = true;
    for (std::size_t k = first; k < first + len; ++k)
      w.usable = w.usable && positive_finite(f.F(static_cast<Eigen::Index>(k)));
    if (w.usable) {
      const auto line = log_log_fit(f, first, len);
      w.slope = line.slope;
      w.rss = line.rss;
    }
    out.push_back(w);
  }
  return out;
}

ScaleRange detect_scaling_range(const FluctuationFunction& f, int window_len) {
  const auto scans = scan_fitting_windows(f, window_len);
  const WindowScan* best = nullptr;
  for (const auto& w : scans) {
    if (!w.usable) continue;
    if (best == nullptr || w.rss < best->rss - kRssTieTolerance * std::max(1.0, best->rss))
      best = &w;
  }
  if (best == nullptr)
    throw InsufficientDataError("no fitting window of " + std::to_string(window_len) +
                                " points with positive fluctuations (grid has " +
                                std::to_string(f.scales.size()) + " scales)");
  return best->range;
}

ScaleRange resolve_range(const FluctuationFunction& f, const RangePolicy& policy) {
  if (policy.kind == RangePolicy::Kind::Auto) return detect_scaling_range(f, policy.window_len);
  if (f.scales.empty()) throw InsufficientDataError("empty fluctuation function");
  return {f.scales.front(), f.scales.back()};
}

}  // namespace dfadma
