#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "dfadma/detrend.hpp"

namespace dfadma {

/// Inclusive bounds of a scaling range, in box-size units.
struct ScaleRange {
  Scale lo = 0;
  Scale hi = 0;

  bool contains(Scale s) const { return s >= lo && s <= hi; }
  friend bool operator==(const ScaleRange&, const ScaleRange&) = default;
};

template <typename Scalar>
struct LineFit {
  Scalar slope{};
  Scalar intercept{};
  Scalar slope_stderr{};
  Scalar rss{};
  Eigen::Index n = 0;
};

/// Ordinary least squares y = intercept + slope * x, with the homoskedastic
/// standard error of the slope (zero when only two points are given).
template <typename DX, typename DY>
LineFit<typename DX::Scalar> least_squares_line(const Eigen::MatrixBase<DX>& x,
                                                const Eigen::MatrixBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  const Eigen::Index n = x.size();
  const Scalar mx = x.mean();
  const Scalar my = y.mean();
  const auto dx = (x.array() - mx).eval();
  const auto dy = (y.array() - my).eval();
  const Scalar sxx = dx.square().sum();
  LineFit<Scalar> fit;
  fit.n = n;
  fit.slope = sxx > Scalar(0) ? (dx * dy).sum() / sxx : Scalar(0);
  fit.intercept = my - fit.slope * mx;
  fit.rss = (dy - fit.slope * dx).square().sum();
  fit.slope_stderr =
      (n > 2 && sxx > Scalar(0)) ? std::sqrt(fit.rss / Scalar(n - 2) / sxx) : Scalar(0);
  return fit;
}

struct ScalingFit {
  double H = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  ScaleRange range;
  Eigen::Index n_points = 0;
};

/// Power-law fit ln F = a + H ln s over grid points inside `range`.
ScalingFit fit_power_law(const FluctuationFunction& f, ScaleRange range);

/// One candidate fitting window of the scaling-range search.
struct WindowScan {
  ScaleRange range;
  double slope = 0.0;
  double rss = 0.0;
  bool usable = false;  // every F in the window is positive
};

std::vector<WindowScan> scan_fitting_windows(const FluctuationFunction& f, int window_len);

/// Slides a window of exactly `window_len` consecutive grid points across the
/// fluctuation function and returns the one with the smallest log-log residual;
/// ties go to the earliest window.
ScaleRange detect_scaling_range(const FluctuationFunction& f, int window_len = 15);

/// How the fitted scaling range is chosen: the whole grid, or the
/// minimal-residual window search.
struct RangePolicy {
  enum class Kind { Full, Auto };
  Kind kind = Kind::Full;
  int window_len = 15;

  static RangePolicy full() { return {}; }
  static RangePolicy automatic(int window_len = 15) { return {Kind::Auto, window_len}; }
};

ScaleRange resolve_range(const FluctuationFunction& f, const RangePolicy& policy);

struct ExponentRelations {
  double H;
  double eta;    // power-spectrum exponent
  double gamma;  // autocorrelation exponent
};

constexpr ExponentRelations exponent_relations(double H) { return {H, 2.0 * H - 1.0, 2.0 - 2.0 * H}; }
constexpr double hurst_from_eta(double eta) { return (eta + 1.0) / 2.0; }

}  // namespace dfadma
