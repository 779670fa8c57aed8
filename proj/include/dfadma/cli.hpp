#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfadma/detrend.hpp"
#include "dfadma/random.hpp"
#include "dfadma/scaling.hpp"

namespace dfadma::cli {

/// Fully-resolved parameters of one run. Everything except `threads` is echoed
/// into the artifacts; worker count never changes results.
struct RunConfig {
  std::string subcommand;  // analyze | test | rolling | synth
  std::string input;
  std::string output = "-";
  std::string format = "csv";  // csv | json

  std::string method = "dfa";  // dfa | dma | all (test only)
  int order = 1;
  double theta = 0.0;
  int density = 20;
  std::string range = "full";  // full | auto
  int window_len = 15;

  std::optional<int> shuffles;  // test: 10000, rolling: 1000
  Eigen::Index window = 500;
  Eigen::Index step = 1;
  std::string subseries = "none";  // none | gulf-iraq | nafta | all
  std::string gulf_date = "1990-08-02";
  std::string iraq_date = "2003-03-20";
  std::string nafta_date = "1994-01-01";
  bool include_ensemble = false;
  std::string scan_output;  // analyze: optional rss-scan CSV

  Eigen::Index n = 16384;
  double hurst = 0.5;
  double sigma = 1.0;
  bool as_prices = false;
  double start_price = 100.0;
  std::string start_date = "2000-01-03";

  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
};

/// Fills subcommand-dependent defaults (e.g. shuffle counts) and validates.
RunConfig resolve(RunConfig config);

nlohmann::ordered_json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Reads the embedded config from a JSON artifact or a CSV artifact's
/// `# config:` line.
RunConfig config_from_artifact(const std::string& path);

/// Method list implied by the config; "all" expands to BDMA, CDMA, FDMA, DFA.
std::vector<Method> methods(const RunConfig& config);
RangePolicy range_policy(const RunConfig& config);

/// Executes one subcommand. Artifacts are written to a temporary file and
/// renamed into place, so a failed run leaves no partial output. Human-facing
/// messages go to `log`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& log);

}  // namespace dfadma::cli
