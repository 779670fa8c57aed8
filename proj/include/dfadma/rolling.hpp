#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "dfadma/detrend.hpp"
#include "dfadma/random.hpp"
#include "dfadma/scaling.hpp"
#include "dfadma/timeseries.hpp"

namespace dfadma {

enum class BandFlag { Below, Inside, Above };

std::string_view to_string(BandFlag f);
BandFlag band_flag(double H, double q025, double q975);

/// Windows whose selected range ends below this scale are marked as suspect.
inline constexpr Scale kLowRangeScale = 50;

struct WindowResult {
  Eigen::Index start = 0;  // index of the first return in the window
  Date end_date;
  double H = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  ScaleRange range;
  BandFlag flag = BandFlag::Inside;
  bool low_range = false;  // range.hi < kLowRangeScale
};

struct RollingOptions {
  Eigen::Index window_size = 500;  // returns per window
  Eigen::Index step = 1;
  int n_shuffles = 1000;
  int window_len = 15;
  int points_per_decade = 20;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
};

/// Number of window positions: floor((n_returns - window_size) / step) + 1.
Eigen::Index window_count(Eigen::Index n_returns, const RollingOptions& options);

/// Estimate and shuffle-band one window starting at return index `start`.
/// Depends only on the window's returns, `start`, and the base seed.
WindowResult analyze_window(const ReturnSeries& returns, Eigen::Index start, const Method& method,
                            const ScaleGrid& grid, const RollingOptions& options);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Moving-window exponents with 2.5/97.5% shuffle bands, ordered by window.
std::vector<WindowResult> rolling_analysis(const PriceSeries& prices, const Method& method,
                                           const RollingOptions& options,
                                           const ProgressFn& progress = {});

}  // namespace dfadma
