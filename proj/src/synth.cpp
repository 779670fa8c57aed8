#include "dfadma/synth.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "dfadma/error.hpp"

namespace dfadma {
namespace {

void check_spec(Eigen::Index n, double hurst, double sigma) {
  if (n < 2) throw ConfigError("fGn length must be >= 2");
  if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("fGn Hurst exponent must lie in (0, 1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("fGn sigma must be positive");
}

}  // namespace

double fgn_autocovariance(Eigen::Index k, double hurst, double sigma) {
  const double kk = std::abs(static_cast<double>(k));
  const double h2 = 2.0 * hurst;
  return 0.5 * sigma * sigma *
         (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

std::size_t fgn_normal_count(Eigen::Index n) { return 2 * static_cast<std::size_t>(n); }

Eigen::VectorXd fgn_from_normals(Eigen::Index n, double hurst, double sigma,
                                 std::span<const double> normals) {
  check_spec(n, hurst, sigma);
  if (normals.size() != fgn_normal_count(n))
    throw ConfigError("fGn synthesis needs " + std::to_string(fgn_normal_count(n)) +
                      " normal draws, got " + std::to_string(normals.size()));

  const auto m = static_cast<std::size_t>(2 * (n - 1));
  const std::size_t half = m / 2;  // == n - 1

  // First row of the circulant: gamma(0..n-1), then gamma(n-2..1).
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k <= half; ++k)
    row[k] = fgn_autocovariance(static_cast<Eigen::Index>(k), hurst, sigma);
  for (std::size_t k = half + 1; k < m; ++k) row[k] = row[m - k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eig;
  fft.fwd(eig, row);

  double max_eig = 0.0;
  for (const auto& e : eig) max_eig = std::max(max_eig, e.real());
  std::vector<double> lambda(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double v = eig[j].real();
    if (v < -1e-9 * max_eig)
      throw NumericalError("circulant embedding has negative eigenvalue " + std::to_string(v) +
                           " at bin " + std::to_string(j));
    lambda[j] = std::max(v, 0.0);
  }

  const double md = static_cast<double>(m);
  std::vector<std::complex<double>> w(m);
  for (std::size_t j = 0; j <= half; ++j) {
    const double z1 = normals[2 * j];
    const double z2 = normals[2 * j + 1];
    if (j == 0 || j == half) {
      w[j] = std::sqrt(lambda[j] / md) * z1;
    } else {
      const double a = std::sqrt(lambda[j] / (2.0 * md));
      w[j] = {a * z1, a * z2};
      w[m - j] = {a * z1, -a * z2};
    }
  }

  std::vector<std::complex<double>> x;
  fft.fwd(x, w);
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = x[static_cast<std::size_t>(i)].real();
  return out;
}

Eigen::VectorXd standard_normals(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  return z;
}

Eigen::VectorXd generate_fgn(const FgnSpec& spec) {
  check_spec(spec.n, spec.hurst, spec.sigma);
  const auto z = standard_normals(fgn_normal_count(spec.n), spec.seed);
  return fgn_from_normals(spec.n, spec.hurst, spec.sigma,
                          std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
}

PriceSeries prices_from_returns(const Eigen::VectorXd& returns, double start_price, Date start) {
  if (!(start_price > 0.0)) throw ConfigError("start price must be positive");
  std::vector<Date> dates;
  std::vector<double> prices;
  dates.reserve(static_cast<std::size_t>(returns.size()) + 1);
  prices.reserve(dates.capacity());
  std::chrono::sys_days day{start};
  double log_price = std::log(start_price);
  dates.emplace_back(day);
  prices.push_back(start_price);
  for (Eigen::Index i = 0; i < returns.size(); ++i) {
    day += std::chrono::days{1};
    log_price += returns(i);
    dates.emplace_back(day);
    prices.push_back(std::exp(log_price));
  }
  return PriceSeries(std::move(dates), std::move(prices));
}

}  // namespace dfadma
