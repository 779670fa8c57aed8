#include "dfadma/detrend.hpp"

#include <algorithm>
#include <cstdio>

namespace dfadma {

ScaleGrid::ScaleGrid(std::vector<Scale> scales) : scales_(std::move(scales)) {
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i] < 1) throw ConfigError("scale grid: scales must be positive");
    if (i > 0 && scales_[i] <= scales_[i - 1])
      throw ConfigError("scale grid: scales must be strictly increasing");
  }
}

ScaleGrid ScaleGrid::restricted(Scale lo, Scale hi) const {
  std::vector<Scale> out;
  std::copy_if(scales_.begin(), scales_.end(), std::back_inserter(out),
               [&](Scale s) { return s >= lo && s <= hi; });
  return ScaleGrid(std::move(out));
}

namespace {

std::vector<Scale> log_grid(Scale lo, Scale hi, int density) {
  const double decades = std::log10(static_cast<double>(hi) / static_cast<double>(lo));
  const auto steps = static_cast<int>(std::floor(decades * density + 1e-9));
  std::vector<Scale> out;
  for (int k = 0; k <= steps; ++k) {
    const auto s = static_cast<Scale>(
        std::llround(static_cast<double>(lo) * std::pow(10.0, static_cast<double>(k) / density)));
    out.push_back(std::min(s, hi));
  }
  out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ScaleGrid default_scales(Eigen::Index n, int points_per_decade) {
  if (points_per_decade < 1) throw ConfigError("grid density must be >= 1 point per decade");
  const Scale hi = n / 10;
  if (n < 40 || hi - kMinDefaultScale + 1 < static_cast<Scale>(kMinGridPoints))
    throw InsufficientDataError("series of length " + std::to_string(n) +
                                " cannot yield " + std::to_string(kMinGridPoints) +
                                " scales in [10, n/10]");
  for (int density = points_per_decade;; ++density) {
    auto scales = log_grid(kMinDefaultScale, hi, density);
    if (scales.size() >= kMinGridPoints) return ScaleGrid(std::move(scales));
  }
}

void validate(const Method& m) {
  if (const auto* dma = std::get_if<DmaMethod>(&m)) {
    if (!(dma->theta >= 0.0 && dma->theta <= 1.0))
      throw ConfigError("DMA theta must lie in [0, 1]");
  } else if (std::get<DfaMethod>(m).order < 1) {
    throw ConfigError("DFA order must be >= 1");
  }
}

std::string method_tag(const Method& m) {
  if (const auto* dma = std::get_if<DmaMethod>(&m)) {
    if (dma->theta == 0.0) return "BDMA";
    if (dma->theta == 0.5) return "CDMA";
    if (dma->theta == 1.0) return "FDMA";
    char buf[48];
    std::snprintf(buf, sizeof buf, "DMA(theta=%g)", dma->theta);
    return buf;
  }
  return "DFA-" + std::to_string(std::get<DfaMethod>(m).order);
}

FluctuationFunction dma_fluctuation(const Eigen::VectorXd& profile, const ScaleGrid& grid,
                                    DmaMethod cfg) {
  return {grid.scales(), dma_fluctuation(profile, std::span<const Scale>(grid.scales()), cfg.theta),
          method_tag(cfg), profile.size()};
}

FluctuationFunction dfa_fluctuation(const Eigen::VectorXd& profile, const ScaleGrid& grid,
                                    DfaMethod cfg) {
  return {grid.scales(), dfa_fluctuation(profile, std::span<const Scale>(grid.scales()), cfg.order),
          method_tag(cfg), profile.size()};
}

FluctuationFunction fluctuation(const Eigen::VectorXd& profile, const ScaleGrid& grid,
                                const Method& method) {
  validate(method);
  return std::visit(
      [&](auto cfg) {
        if constexpr (std::is_same_v<decltype(cfg), DmaMethod>)
          return dma_fluctuation(profile, grid, cfg);
        else
          return dfa_fluctuation(profile, grid, cfg);
      },
      method);
}

}  // namespace dfadma
