#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "dfadma/detrend.hpp"
#include "dfadma/rolling.hpp"
#include "dfadma/scaling.hpp"
#include "dfadma/shuffletest.hpp"

namespace dfadma {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

nlohmann::ordered_json to_json(const FluctuationFunction& f);
nlohmann::ordered_json to_json(const ScalingFit& fit);
nlohmann::ordered_json to_json(const ShuffleTestResult& r, bool include_ensemble);
nlohmann::ordered_json to_json(const WindowResult& w);

/// `s,F` rows.
void write_fluctuation_csv(std::ostream& out, const FluctuationFunction& f);
/// `s_lo,s_hi,slope,rss,usable` rows of the scaling-range search.
void write_scan_csv(std::ostream& out, std::span<const WindowScan> scans);
/// `end_date,H,q025,q975,flag,s_lo,s_hi` rows.
void write_rolling_csv(std::ostream& out, std::span<const WindowResult> windows);

}  // namespace dfadma
