#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfadma/detrend.hpp"
#include "dfadma/random.hpp"
#include "dfadma/scaling.hpp"
#include "dfadma/timeseries.hpp"

namespace dfadma {

inline constexpr double kSignificanceLevel = 0.01;

/// Two-tailed p-value: fraction of ensemble members whose distance from the
/// ensemble mean strictly exceeds that of H.
double two_tailed_p(double H, std::span<const double> ensemble);

/// Empirical quantile with linear interpolation between closest ranks.
/// `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double prob);

/// Scaling exponent of a return sample: profile, fluctuation over `grid`,
/// power-law fit over `range`.
double estimate_exponent(const Eigen::VectorXd& returns, const Method& method,
                         const ScaleGrid& grid, ScaleRange range);

struct ShuffleTestOptions {
  int n_replicates = 10000;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;  // 0 = all cores; never affects results
  double alpha = kSignificanceLevel;
};

struct ShuffleTestResult {
  std::string method;
  ScalingFit fit;  // original series, over `range`
  ScaleRange range;
  std::vector<double> ensemble;  // replicate exponents, ordered by replicate index
  double mean_hs = 0.0;
  double p = 1.0;
  double q025 = 0.0;
  double q975 = 0.0;
  int n_replicates = 0;
  std::uint64_t seed = 0;
  std::size_t redraws = 0;
  double alpha = kSignificanceLevel;
  bool rejected = false;

  double H() const { return fit.H; }
};

/// Ensemble summary shared by the whole-sample test and moving windows.
struct EnsembleSummary {
  double mean = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
};
EnsembleSummary summarize_ensemble(std::span<const double> ensemble);

/// Replicate exponents from `n` shuffles of `returns`, all fitted over the same
/// `range`. Replicate i draws seeds derive_seed(seed, i, attempt); a replicate
/// whose estimation fails is redrawn with the next attempt. Throws
/// NumericalError once redraws exceed max(1, n/100).
std::vector<double> shuffle_ensemble(const Eigen::VectorXd& returns, const Method& method,
                                     const ScaleGrid& grid, ScaleRange range, int n,
                                     std::uint64_t seed, unsigned threads,
                                     std::size_t* redraws = nullptr);

/// Tests H = <H^s> by comparing the exponent of `r` with those of its shuffles.
ShuffleTestResult efficiency_test(const ReturnSeries& r, const Method& method,
                                  const ScaleGrid& grid, const RangePolicy& policy,
                                  const ShuffleTestOptions& options = {});

/// "CDMA  H=0.5030  <H^s>=0.4980  p=0.7930  not rejected at 0.01"
std::string summary_line(const ShuffleTestResult& r);

}  // namespace dfadma
