#pragma once

#include <cmath>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dfadma/error.hpp"

namespace dfadma {

using Scale = Eigen::Index;

/// Strictly increasing positive box sizes.
class ScaleGrid {
 public:
  ScaleGrid() = default;
  explicit ScaleGrid(std::vector<Scale> scales);

  const std::vector<Scale>& scales() const { return scales_; }
  std::size_t size() const { return scales_.size(); }
  bool empty() const { return scales_.empty(); }
  Scale front() const { return scales_.front(); }
  Scale back() const { return scales_.back(); }

  /// Grid points s with lo <= s <= hi.
  ScaleGrid restricted(Scale lo, Scale hi) const;

  friend bool operator==(const ScaleGrid&, const ScaleGrid&) = default;

 private:
  std::vector<Scale> scales_;
};

inline constexpr Scale kMinDefaultScale = 10;
inline constexpr std::size_t kMinGridPoints = 16;

/// Roughly log-spaced integer scales from 10 to floor(n/10). When the requested
/// density yields fewer than 16 distinct scales the density is raised until it
/// does; if [10, n/10] holds fewer than 16 integers the series is too short.
ScaleGrid default_scales(Eigen::Index n, int points_per_decade = 20);

/// Moving-average detrending; theta = 0 backward, 0.5 centred, 1 forward.
struct DmaMethod {
  double theta = 0.0;
};

/// Polynomial detrending in non-overlapping boxes.
struct DfaMethod {
  int order = 1;
};

using Method = std::variant<DmaMethod, DfaMethod>;

/// Throws ConfigError on theta outside [0,1] or DFA order < 1.
void validate(const Method& m);
std::string method_tag(const Method& m);

struct FluctuationFunction {
  std::vector<Scale> scales;
  Eigen::VectorXd F;
  std::string method;
  Eigen::Index n = 0;
};

namespace detail {

template <typename Scalar>
using Accumulator = std::conditional_t<(sizeof(Scalar) < sizeof(double)), double, long double>;

inline void check_scale(Scale s, Scale min_scale, Eigen::Index n, const char* what) {
  if (s > n)
    throw RangeError(std::string(what) + ": scale " + std::to_string(s) +
                     " exceeds series length " + std::to_string(n));
  if (s < min_scale)
    throw RangeError(std::string(what) + ": scale " + std::to_string(s) + " below minimum " +
                     std::to_string(min_scale));
}

}  // namespace detail

/// Number of past and future points in the moving-average window of size s.
struct DmaWindow {
  Scale past;
  Scale future;
};

inline DmaWindow dma_window(Scale s, double theta) {
  const double span = static_cast<double>(s - 1);
  return {static_cast<Scale>(std::ceil(span * (1.0 - theta))),
          static_cast<Scale>(std::floor(span * theta))};
}

/// DMA fluctuation F(s) for each scale. The RMS runs over indices whose whole
/// window lies inside the profile.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> dma_fluctuation(
    const Eigen::MatrixBase<Derived>& y, std::span<const Scale> scales, double theta) {
  using Scalar = typename Derived::Scalar;
  using Acc = detail::Accumulator<Scalar>;
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("DMA theta must lie in [0, 1]");
  const Eigen::Index n = y.size();

  std::vector<Acc> prefix(static_cast<std::size_t>(n) + 1);
  prefix[0] = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + Acc(y(i));

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> F(static_cast<Eigen::Index>(scales.size()));
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const Scale s = scales[k];
    detail::check_scale(s, 2, n, "DMA");
    const auto [past, future] = dma_window(s, theta);
    Acc sum_sq = 0;
    for (Eigen::Index i = past; i + future < n; ++i) {
      const auto hi = static_cast<std::size_t>(i + future + 1);
      const auto lo = static_cast<std::size_t>(i - past);
      const Acc trend = (prefix[hi] - prefix[lo]) / Acc(s);
      const Acc eps = Acc(y(i)) - trend;
      sum_sq += eps * eps;
    }
    const auto count = n - past - future;
    F(static_cast<Eigen::Index>(k)) = static_cast<Scalar>(std::sqrt(sum_sq / Acc(count)));
  }
  return F;
}

/// Orthonormal basis (s x (order+1)) of polynomials up to `order` on 0..s-1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> polynomial_basis(Scale s, int order) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index cols = order + 1;
  Mat vander(s, cols);
  const Scalar half = Scalar(s - 1) / Scalar(2);
  const Scalar denom = half > Scalar(0) ? half : Scalar(1);
  for (Eigen::Index j = 0; j < s; ++j) {
    const Scalar x = (Scalar(j) - half) / denom;
    Scalar pw{1};
    for (Eigen::Index c = 0; c < cols; ++c) {
      vander(j, c) = pw;
      pw *= x;
    }
  }
  Eigen::HouseholderQR<Mat> qr(vander);
  return qr.householderQ() * Mat::Identity(s, cols);
}

/// DFA fluctuation F(s): floor(n/s) boxes laid from the start plus floor(n/s)
/// from the end, each detrended by a least-squares polynomial.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> dfa_fluctuation(
    const Eigen::MatrixBase<Derived>& y, std::span<const Scale> scales, int order) {
  using Scalar = typename Derived::Scalar;
  using Acc = detail::Accumulator<Scalar>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (order < 1) throw ConfigError("DFA order must be >= 1");
  const Eigen::Index n = y.size();

  Vec F(static_cast<Eigen::Index>(scales.size()));
  Vec residual;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const Scale s = scales[k];
    detail::check_scale(s, order + 2, n, "DFA");
    const auto basis = polynomial_basis<Scalar>(s, order);
    const Eigen::Index boxes = n / s;

    Acc sum_sq = 0;
    auto accumulate_box = [&](Eigen::Index start) {
      const auto seg = y.segment(start, s);
      residual.noalias() = seg - basis * (basis.transpose() * seg);
      sum_sq += Acc(residual.squaredNorm());
    };
    for (Eigen::Index b = 0; b < boxes; ++b) accumulate_box(b * s);
    for (Eigen::Index b = 0; b < boxes; ++b) accumulate_box(n - (b + 1) * s);

    F(static_cast<Eigen::Index>(k)) =
        static_cast<Scalar>(std::sqrt(sum_sq / Acc(2 * boxes * s)));
  }
  return F;
}

FluctuationFunction dma_fluctuation(const Eigen::VectorXd& profile, const ScaleGrid& grid,
                                    DmaMethod cfg);
FluctuationFunction dfa_fluctuation(const Eigen::VectorXd& profile, const ScaleGrid& grid,
                                    DfaMethod cfg);
FluctuationFunction fluctuation(const Eigen::VectorXd& profile, const ScaleGrid& grid,
                                const Method& method);

}  // namespace dfadma
