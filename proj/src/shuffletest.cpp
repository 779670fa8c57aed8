#include "dfadma/shuffletest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dfadma/parallel.hpp"

namespace dfadma {

double two_tailed_p(double H, std::span<const double> ensemble) {
  if (ensemble.empty()) throw InsufficientDataError("p-value needs a nonempty ensemble");
  const double mean =
      std::accumulate(ensemble.begin(), ensemble.end(), 0.0) / static_cast<double>(ensemble.size());
  const double observed = std::abs(H - mean);
  const auto exceed = std::count_if(ensemble.begin(), ensemble.end(),
                                    [&](double hs) { return std::abs(hs - mean) > observed; });
  return static_cast<double>(exceed) / static_cast<double>(ensemble.size());
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw InsufficientDataError("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

EnsembleSummary summarize_ensemble(std::span<const double> ensemble) {
  if (ensemble.empty()) throw InsufficientDataError("empty ensemble");
  std::vector<double> sorted(ensemble.begin(), ensemble.end());
  std::sort(sorted.begin(), sorted.end());
  return {std::accumulate(ensemble.begin(), ensemble.end(), 0.0) /
              static_cast<double>(ensemble.size()),
          quantile_sorted(sorted, 0.025), quantile_sorted(sorted, 0.975)};
}

double estimate_exponent(const Eigen::VectorXd& returns, const Method& method,
                         const ScaleGrid& grid, ScaleRange range) {
  const auto y = profile(returns);
  return fit_power_law(fluctuation(y, grid, method), range).H;
}

std::vector<double> shuffle_ensemble(const Eigen::VectorXd& returns, const Method& method,
                                     const ScaleGrid& grid, ScaleRange range, int n,
                                     std::uint64_t seed, unsigned threads,
                                     std::size_t* redraws) {
  if (n < 1) throw ConfigError("number of shuffles must be >= 1");
  validate(method);
  const auto fit_grid = grid.restricted(range.lo, range.hi);
  const auto cap = std::max<std::size_t>(1, static_cast<std::size_t>(n) / 100);
  std::vector<double> ensemble(static_cast<std::size_t>(n));
  std::vector<std::size_t> attempts(static_cast<std::size_t>(n), 0);

  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    Eigen::VectorXd work(returns.size());
    for (std::size_t attempt = 0;; ++attempt) {
      work = returns;
      shuffle_values(std::span<double>(work.data(), static_cast<std::size_t>(work.size())),
                     derive_seed(seed, i, attempt));
      try {
        ensemble[i] = estimate_exponent(work, method, fit_grid, range);
        attempts[i] = attempt;
        return;
      } catch (const Error& e) {
        if (attempt >= cap)
          throw NumericalError(std::string("shuffled replicate failed repeatedly: ") + e.what());
      }
    }
  });

  const auto total = std::accumulate(attempts.begin(), attempts.end(), std::size_t{0});
  if (total > cap)
    throw NumericalError("shuffle test aborted: " + std::to_string(total) +
                         " replicate redraws exceed the cap of " + std::to_string(cap));
  if (redraws != nullptr) *redraws = total;
  return ensemble;
}

ShuffleTestResult efficiency_test(const ReturnSeries& r, const Method& method,
                                  const ScaleGrid& grid, const RangePolicy& policy,
                                  const ShuffleTestOptions& options) {
  validate(method);
  if (options.n_replicates < 1) throw ConfigError("number of shuffles must be >= 1");

  const auto y = profile(r);
  const auto ff = fluctuation(y, grid, method);

  ShuffleTestResult result;
  result.method = method_tag(method);
  result.range = resolve_range(ff, policy);
  result.fit = fit_power_law(ff, result.range);
  result.n_replicates = options.n_replicates;
  result.seed = options.seed;
  result.alpha = options.alpha;
  result.ensemble = shuffle_ensemble(r.values, method, grid, result.range, options.n_replicates,
                                     options.seed, options.threads, &result.redraws);

  const auto summary = summarize_ensemble(result.ensemble);
  result.mean_hs = summary.mean;
  result.q025 = summary.q025;
  result.q975 = summary.q975;
  result.p = two_tailed_p(result.fit.H, result.ensemble);
  result.rejected = result.p < result.alpha;
  return result;
}

std::string summary_line(const ShuffleTestResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s H=%.4f  <H^s>=%.4f  p=%.4f  %s at %g", r.method.c_str(),
                r.fit.H, r.mean_hs, r.p, r.rejected ? "REJECTED" : "not rejected", r.alpha);
  return buf;
}

}  // namespace dfadma
