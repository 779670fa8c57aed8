#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dfadma {

using Date = std::chrono::year_month_day;

/// Parses an ISO 8601 (YYYY-MM-DD) or US (MM/DD/YYYY) calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& d);

/// Dated, strictly positive price observations with strictly increasing dates.
class PriceSeries {
 public:
  PriceSeries(std::vector<Date> dates, std::vector<double> prices);

  std::size_t size() const { return prices_.size(); }
  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<double>& prices() const { return prices_; }
  Date front_date() const { return dates_.front(); }
  Date back_date() const { return dates_.back(); }

  /// Contiguous sub-series [first, first + count).
  PriceSeries slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::vector<Date> dates_;
  std::vector<double> prices_;
};

/// Log returns; `dates[t]` is the date of the later of the two prices.
struct ReturnSeries {
  std::vector<Date> dates;
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
};

struct LoadResult {
  PriceSeries series;
  std::size_t dropped = 0;  // records with missing, non-numeric or non-positive prices
};

/// Reads `date,price` records, one per line. Blank lines and lines starting
/// with '#' are skipped. A header line is allowed; the
/// date format (ISO or US) is detected from the first record and must hold
/// for the whole file.
LoadResult load_prices(std::istream& in);
LoadResult load_prices_file(const std::string& path);

ReturnSeries log_returns(const PriceSeries& p);

/// Cumulative sum of demeaned values.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> profile(
    const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y(r.size());
  if (r.size() == 0) return y;
  const Scalar mean = r.mean();
  Scalar acc{0};
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    acc += r(i) - mean;
    y(i) = acc;
  }
  return y;
}

inline Eigen::VectorXd profile(const ReturnSeries& r) { return profile(r.values); }

/// Splits at each cut date; a cut date belongs to the segment it starts.
/// Cut dates must be strictly increasing and strictly inside the date span.
std::vector<PriceSeries> split_by_dates(const PriceSeries& p, std::span<const Date> cuts);

}  // namespace dfadma
