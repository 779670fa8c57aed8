#include "dfadma/rolling.hpp"

#include <atomic>
#include <mutex>

#include "dfadma/parallel.hpp"
#include "dfadma/shuffletest.hpp"

namespace dfadma {

std::string_view to_string(BandFlag f) {
  switch (f) {
    case BandFlag::Below:
      return "below";
    case BandFlag::Above:
      return "above";
    case BandFlag::Inside:
      break;
  }
  return "inside";
}

BandFlag band_flag(double H, double q025, double q975) {
  if (H < q025) return BandFlag::Below;
  if (H > q975) return BandFlag::Above;
  return BandFlag::Inside;
}

Eigen::Index window_count(Eigen::Index n_returns, const RollingOptions& options) {
  if (n_returns < options.window_size) return 0;
  return (n_returns - options.window_size) / options.step + 1;
}

WindowResult analyze_window(const ReturnSeries& returns, Eigen::Index start, const Method& method,
                            const ScaleGrid& grid, const RollingOptions& options) {
  const Eigen::VectorXd window = returns.values.segment(start, options.window_size);
  const auto ff = fluctuation(profile(window), grid, method);

  WindowResult w;
  w.start = start;
  w.end_date = returns.dates[static_cast<std::size_t>(start + options.window_size - 1)];
  w.range = detect_scaling_range(ff, options.window_len);
  w.H = fit_power_law(ff, w.range).H;

  // Single-threaded inside a window; windows themselves run in parallel.
  const auto window_seed = derive_seed(options.seed, static_cast<std::uint64_t>(start));
  const auto ensemble =
      shuffle_ensemble(window, method, grid, w.range, options.n_shuffles, window_seed, 1);
  const auto summary = summarize_ensemble(ensemble);
  w.q025 = summary.q025;
  w.q975 = summary.q975;
  w.flag = band_flag(w.H, w.q025, w.q975);
  w.low_range = w.range.hi < kLowRangeScale;
  return w;
}

std::vector<WindowResult> rolling_analysis(const PriceSeries& prices, const Method& method,
                                           const RollingOptions& options,
                                           const ProgressFn& progress) {
  validate(method);
  if (options.step < 1) throw ConfigError("window step must be >= 1");
  if (options.n_shuffles < 1) throw ConfigError("number of shuffles must be >= 1");
  if (options.window_len < 2) throw ConfigError("fitting window must hold at least 2 points");
  const auto n_returns = static_cast<Eigen::Index>(prices.size()) - 1;
  if (options.window_size > n_returns)
    throw ConfigError("window of " + std::to_string(options.window_size) +
                      " returns exceeds the " + std::to_string(n_returns) + " available");

  ScaleGrid grid;
  try {
    grid = default_scales(options.window_size, options.points_per_decade);
  } catch (const InsufficientDataError& e) {
    throw ConfigError("window size " + std::to_string(options.window_size) +
                      " too small for a scale grid: " + e.what());
  }
  if (grid.size() < static_cast<std::size_t>(options.window_len))
    throw ConfigError("scale grid of " + std::to_string(grid.size()) +
                      " points cannot hold a fitting window of " +
                      std::to_string(options.window_len));

  const auto returns = log_returns(prices);
  const auto count = static_cast<std::size_t>(window_count(n_returns, options));
  std::vector<WindowResult> results(count);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(count, options.threads, [&](std::size_t k) {
    results[k] = analyze_window(returns, static_cast<Eigen::Index>(k) * options.step, method,
                                grid, options);
    const auto finished = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(finished, count);
    }
  });
  return results;
}

}  // namespace dfadma
