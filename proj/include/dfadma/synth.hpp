#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "dfadma/random.hpp"
#include "dfadma/timeseries.hpp"

namespace dfadma {

struct FgnSpec {
  Eigen::Index n = 0;
  double hurst = 0.5;
  double sigma = 1.0;
  std::uint64_t seed = kDefaultSeed;
};

/// Autocovariance of fractional Gaussian noise at lag k.
double fgn_autocovariance(Eigen::Index k, double hurst, double sigma = 1.0);

/// Standard normal draws consumed by one synthesis of length n: two per
/// frequency bin 0..n-1 of the 2(n-1)-point circulant embedding.
std::size_t fgn_normal_count(Eigen::Index n);

/// Exact fGn by circulant embedding, driven by caller-supplied standard normals
/// (see fgn_normal_count). Linear in the draws.
Eigen::VectorXd fgn_from_normals(Eigen::Index n, double hurst, double sigma,
                                 std::span<const double> normals);

/// Exact fGn sample; deterministic given the seed.
Eigen::VectorXd generate_fgn(const FgnSpec& spec);

/// Standard normal draws from a seeded generator, in generation order.
Eigen::VectorXd standard_normals(std::size_t count, std::uint64_t seed);

/// Prices start_price * exp(cumsum(returns)) on consecutive calendar days,
/// with start_price itself on `start`.
PriceSeries prices_from_returns(const Eigen::VectorXd& returns, double start_price, Date start);

}  // namespace dfadma
