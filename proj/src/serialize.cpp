#include "dfadma/serialize.hpp"

#include <charconv>
#include <cmath>

namespace dfadma {

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

nlohmann::ordered_json to_json(const FluctuationFunction& f) {
  nlohmann::ordered_json j;
  j["method"] = f.method;
  j["n"] = f.n;
  j["s"] = f.scales;
  j["F"] = std::vector<double>(f.F.data(), f.F.data() + f.F.size());
  return j;
}

nlohmann::ordered_json to_json(const ScalingFit& fit) {
  nlohmann::ordered_json j;
  j["H"] = fit.H;
  j["stderr"] = fit.std_error;
  j["range"] = {fit.range.lo, fit.range.hi};
  j["rss"] = fit.rss;
  j["n_points"] = fit.n_points;
  return j;
}

nlohmann::ordered_json to_json(const ShuffleTestResult& r, bool include_ensemble) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["H"] = r.fit.H;
  j["fit"] = to_json(r.fit);
  j["range"] = {r.range.lo, r.range.hi};
  j["mean_hs"] = r.mean_hs;
  j["p"] = r.p;
  j["q025"] = r.q025;
  j["q975"] = r.q975;
  j["n_replicates"] = r.n_replicates;
  j["seed"] = r.seed;
  j["redraws"] = r.redraws;
  j["alpha"] = r.alpha;
  j["rejected"] = r.rejected;
  if (include_ensemble) j["ensemble"] = r.ensemble;
  return j;
}

nlohmann::ordered_json to_json(const WindowResult& w) {
  nlohmann::ordered_json j;
  j["end_date"] = format_date(w.end_date);
  j["start"] = w.start;
  j["H"] = w.H;
  j["q025"] = w.q025;
  j["q975"] = w.q975;
  j["flag"] = std::string(to_string(w.flag));
  j["range"] = {w.range.lo, w.range.hi};
  j["low_range"] = w.low_range;
  return j;
}

void write_fluctuation_csv(std::ostream& out, const FluctuationFunction& f) {
  out << "s,F\n";
  for (std::size_t k = 0; k < f.scales.size(); ++k)
    out << f.scales[k] << ',' << format_number(f.F(static_cast<Eigen::Index>(k))) << '\n';
}

void write_scan_csv(std::ostream& out, std::span<const WindowScan> scans) {
  out << "s_lo,s_hi,slope,rss,usable\n";
  for (const auto& w : scans)
    out << w.range.lo << ',' << w.range.hi << ',' << format_number(w.slope) << ','
        << format_number(w.rss) << ',' << (w.usable ? 1 : 0) << '\n';
}

void write_rolling_csv(std::ostream& out, std::span<const WindowResult> windows) {
  out << "end_date,H,q025,q975,flag,s_lo,s_hi\n";
  for (const auto& w : windows)
    out << format_date(w.end_date) << ',' << format_number(w.H) << ',' << format_number(w.q025)
        << ',' << format_number(w.q975) << ',' << to_string(w.flag) << ',' << w.range.lo << ','
        << w.range.hi << '\n';
}

}  // namespace dfadma
