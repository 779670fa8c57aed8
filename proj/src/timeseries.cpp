#include "dfadma/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dfadma/error.hpp"

namespace dfadma {
namespace {

enum class DateFormat { Iso, Us };

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\"";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::optional<Date> make_date(unsigned y, unsigned m, unsigned d) {
  const Date date{std::chrono::year{static_cast<int>(y)}, std::chrono::month{m},
                  std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::optional<DateFormat> detect_format(std::string_view s) {
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') return DateFormat::Iso;
  if (std::count(s.begin(), s.end(), '/') == 2) return DateFormat::Us;
  return std::nullopt;
}

std::optional<Date> parse_with(std::string_view s, DateFormat fmt) {
  unsigned y = 0, m = 0, d = 0;
  if (fmt == DateFormat::Iso) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(5, 2), m) ||
        !parse_uint(s.substr(8, 2), d))
      return std::nullopt;
    return make_date(y, m, d);
  }
  const auto a = s.find('/');
  const auto b = a == std::string_view::npos ? a : s.find('/', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  const auto ys = s.substr(b + 1);
  if (ys.size() != 4) return std::nullopt;
  if (!parse_uint(s.substr(0, a), m) || !parse_uint(s.substr(a + 1, b - a - 1), d) ||
      !parse_uint(ys, y))
    return std::nullopt;
  return make_date(y, m, d);
}

std::optional<double> parse_price(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(v) || v <= 0.0) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  const auto fmt = detect_format(text);
  if (!fmt) return std::nullopt;
  return parse_with(text, *fmt);
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> prices)
    : dates_(std::move(dates)), prices_(std::move(prices)) {
  if (dates_.size() != prices_.size())
    throw DataError("price series: dates and prices differ in length");
  if (prices_.size() < 2)
    throw InsufficientDataError("price series needs at least 2 observations, got " +
                                std::to_string(prices_.size()));
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!std::isfinite(prices_[i]) || prices_[i] <= 0.0)
      throw DataError("price series: non-positive or non-finite price at " +
                      format_date(dates_[i]));
    if (i > 0 && !(dates_[i - 1] < dates_[i]))
      throw DataError("price series: dates not strictly increasing at " +
                      format_date(dates_[i]));
  }
}

PriceSeries PriceSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) throw RangeError("price series slice out of range");
  const auto d0 = dates_.begin() + static_cast<std::ptrdiff_t>(first);
  const auto p0 = prices_.begin() + static_cast<std::ptrdiff_t>(first);
  return PriceSeries({d0, d0 + static_cast<std::ptrdiff_t>(count)},
                     {p0, p0 + static_cast<std::ptrdiff_t>(count)});
}

LoadResult load_prices(std::istream& in) {
  struct Record {
    Date date;
    double price;
  };
  std::vector<Record> records;
  std::size_t dropped = 0;
  std::optional<DateFormat> fmt;
  std::string line;
  std::size_t lineno = 0;
  bool seen_content = false;
  std::size_t first_bad = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto comma = text.find(',');
    const auto date_field = trim(text.substr(0, comma));
    const auto price_field =
        comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);

    if (!fmt) fmt = detect_format(date_field);
    const auto date = fmt ? parse_with(date_field, *fmt) : std::nullopt;
    if (!date) {
      // Only the first non-empty line may be a header.
      if (!seen_content) {
        seen_content = true;
        fmt.reset();
        continue;
      }
      throw FormatError("line " + std::to_string(lineno) + ": unparseable date '" +
                        std::string(date_field) + "'");
    }
    seen_content = true;
    // Columns after the price are ignored.
    const auto price = parse_price(price_field.substr(0, price_field.find(',')));
    if (!price) {
      if (first_bad == 0) first_bad = lineno;
      ++dropped;
      continue;
    }
    records.push_back({*date, *price});
  }

  if (records.empty()) {
    if (lineno == 0) throw FormatError("empty input");
    throw FormatError("no usable date,price records; first bad line " +
                      std::to_string(first_bad == 0 ? 1 : first_bad));
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) { return a.date < b.date; });
  std::vector<std::string> duplicates;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].date == records[i - 1].date) {
      auto s = format_date(records[i].date);
      if (duplicates.empty() || duplicates.back() != s) duplicates.push_back(std::move(s));
    }
  }
  if (!duplicates.empty()) {
    std::string msg = "duplicate dates:";
    for (const auto& d : duplicates) msg += " " + d;
    throw DataError(msg);
  }

  std::vector<Date> dates;
  std::vector<double> prices;
  dates.reserve(records.size());
  prices.reserve(records.size());
  for (const auto& r : records) {
    dates.push_back(r.date);
    prices.push_back(r.price);
  }
  return {PriceSeries(std::move(dates), std::move(prices)), dropped};
}

LoadResult load_prices_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open input file '" + path + "'");
  return load_prices(in);
}

ReturnSeries log_returns(const PriceSeries& p) {
  if (p.size() < 2) throw InsufficientDataError("log returns need at least 2 prices");
  ReturnSeries r;
  const auto n = static_cast<Eigen::Index>(p.size()) - 1;
  r.values.resize(n);
  r.dates.assign(p.dates().begin() + 1, p.dates().end());
  const auto& px = p.prices();
  for (Eigen::Index t = 0; t < n; ++t)
    r.values(t) = std::log(px[static_cast<std::size_t>(t) + 1]) -
                  std::log(px[static_cast<std::size_t>(t)]);
  return r;
}

std::vector<PriceSeries> split_by_dates(const PriceSeries& p, std::span<const Date> cuts) {
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    if (!(p.front_date() < cuts[j] && cuts[j] < p.back_date()))
      throw RangeError("cut date " + format_date(cuts[j]) + " outside series span " +
                       format_date(p.front_date()) + ".." + format_date(p.back_date()));
    if (j > 0 && !(cuts[j - 1] < cuts[j]))
      throw RangeError("cut dates must be strictly increasing");
  }
  std::vector<PriceSeries> out;
  const auto& dates = p.dates();
  std::size_t begin = 0;
  for (std::size_t j = 0; j <= cuts.size(); ++j) {
    const std::size_t end =
        j < cuts.size()
            ? static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), cuts[j]) -
                                       dates.begin())
            : dates.size();
    if (end - begin < 2)
      throw InsufficientDataError("segment " + std::to_string(j + 1) + " has fewer than 2 observations");
    out.push_back(p.slice(begin, end - begin));
    begin = end;
  }
  return out;
}

}  // namespace dfadma
