#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dfadma/cli.hpp"

using namespace dfadma;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "dfadma_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cli::RunConfig base(const std::string& sub) {
  cli::RunConfig c;
  c.subcommand = sub;
  c.threads = 1;
  return c;
}

// Daily synthetic prices from 1983-04-04, long enough to cover the event presets.
fs::path synthetic_prices(Eigen::Index n, double hurst, std::uint64_t seed) {
  const auto path = scratch() / ("prices_" + std::to_string(n) + "_" + std::to_string(seed) + ".csv");
  if (fs::exists(path)) return path;
  auto c = base("synth");
  c.n = n;
  c.hurst = hurst;
  c.sigma = 0.02;
  c.seed = seed;
  c.as_prices = true;
  c.start_date = "1983-04-04";
  c.output = path.string();
  std::ostringstream log;
  REQUIRE(cli::run(c, log) == 0);
  return path;
}

}  // namespace

TEST_CASE("synth emits loadable prices and the analyze pipeline recovers H = 0.5") {
  const auto prices = synthetic_prices(8192, 0.5, 3);
  auto c = base("analyze");
  c.input = prices.string();
  c.output = (scratch() / "analyze.json").string();
  c.format = "json";
  std::ostringstream log;
  REQUIRE(cli::run(c, log) == 0);
  const auto j = nlohmann::json::parse(slurp(c.output));
  CHECK(j["schema"] == "dfadma.analyze/1");
  CHECK(j["config"]["method"] == "dfa");
  CHECK(j["config"]["input"] == c.input);
  CHECK(j["input"]["n_prices"] == 8193);
  const double H = j["fit"]["H"];
  CHECK(H >= 0.45);
  CHECK(H <= 0.55);
  CHECK(j["fluctuation"]["s"].size() == j["fluctuation"]["F"].size());
  CHECK(j["relations"]["eta"].get<double>() == doctest::Approx(2 * H - 1));
}

TEST_CASE("analyze CSV output and rss scan") {
  const auto prices = synthetic_prices(8192, 0.5, 3);
  auto c = base("analyze");
  c.input = prices.string();
  c.method = "cdma";
  c.range = "auto";
  c.output = (scratch() / "analyze.csv").string();
  c.scan_output = (scratch() / "scan.csv").string();
  std::ostringstream log;
  REQUIRE(cli::run(c, log) == 0);
  const auto text = slurp(c.output);
  CHECK(text.rfind("# dfadma ", 0) == 0);
  CHECK(text.find("# config: {") != std::string::npos);
  CHECK(text.find("\"theta\":0.5") != std::string::npos);
  CHECK(text.find("# fit: {\"H\":") != std::string::npos);
  CHECK(text.find("\ns,F\n10,") != std::string::npos);
  CHECK(slurp(c.scan_output).find("s_lo,s_hi,slope,rss,usable\n") != std::string::npos);
  CHECK(log.str().find("CDMA H=") != std::string::npos);
}

TEST_CASE("errors give a nonzero exit and no output") {
  std::ostringstream log;
  auto c = base("analyze");
  c.input = (scratch() / "does_not_exist.csv").string();
  c.output = (scratch() / "never.csv").string();
  CHECK(cli::run(c, log) == 1);
  CHECK_FALSE(fs::exists(c.output));

  const auto tiny = scratch() / "tiny.csv";
  std::ofstream(tiny) << "1983-04-04,29.44\n1983-04-05,29.71\n1983-04-06,29.9\n";
  c.input = tiny.string();
  CHECK(cli::run(c, log) == 1);
  CHECK_FALSE(fs::exists(c.output));
  CHECK(log.str().find("error:") != std::string::npos);

  auto bad = base("analyze");
  bad.input = tiny.string();
  bad.method = "wavelet";
  CHECK(cli::run(bad, log) == 1);
  bad.method = "all";
  CHECK(cli::run(bad, log) == 1);
}

TEST_CASE("test subcommand: single shuffle, determinism, replay") {
  const auto prices = synthetic_prices(3000, 0.5, 4);
  auto c = base("test");
  c.input = prices.string();
  c.shuffles = 1;
  c.format = "json";
  c.output = (scratch() / "test1.json").string();
  std::ostringstream log;
  REQUIRE(cli::run(c, log) == 0);
  const auto j = nlohmann::json::parse(slurp(c.output));
  const double p = j["results"][0]["p"];
  CHECK((p == 0.0 || p == 1.0));

  c.shuffles = 300;
  c.seed = 42;
  c.method = "all";
  c.output = (scratch() / "test_a.json").string();
  REQUIRE(cli::run(c, log) == 0);
  auto again = c;
  again.threads = 4;
  again.output = (scratch() / "test_b.json").string();
  REQUIRE(cli::run(again, log) == 0);
  auto ja = nlohmann::json::parse(slurp(c.output));
  auto jb = nlohmann::json::parse(slurp(again.output));
  ja["config"].erase("output");
  jb["config"].erase("output");
  CHECK(ja == jb);
  CHECK(ja["results"].size() == 4);

  // Same output path, same seed, different thread count: byte-identical file.
  const auto first = slurp(c.output);
  again.output = c.output;
  REQUIRE(cli::run(again, log) == 0);
  CHECK(slurp(c.output) == first);

  // Replaying the embedded config reproduces the artifact.
  const auto replayed = cli::config_from_artifact(c.output);
  CHECK(replayed.seed == 42);
  CHECK(*replayed.shuffles == 300);
  REQUIRE(cli::run(replayed, log) == 0);
  CHECK(slurp(c.output) == first);

  CHECK(log.str().find("whole  BDMA") != std::string::npos);
}

TEST_CASE("test subcommand: sub-series presets") {
  // 1983-04-04 + 10800 days reaches 2012.
  const auto prices = synthetic_prices(10800, 0.5, 6);
  auto c = base("test");
  c.input = prices.string();
  c.shuffles = 20;
  c.subseries = "all";
  c.output = (scratch() / "subseries.csv").string();
  std::ostringstream log;
  REQUIRE(cli::run(c, log) == 0);
  const auto text = slurp(c.output);
  for (const auto* label : {"\nwhole,1983-04-04,", "\nsub1,1983-04-04,1990-08-01,", "\nsub2,1990-08-02,2003-03-19,",
                            "\nsub3,2003-03-20,", "\nsub4,1983-04-04,1993-12-31,", "\nsub5,1994-01-01,"})
    CHECK(text.find(label) != std::string::npos);

  c.subseries = "nafta";
  c.nafta_date = "1994-03-01";
  c.output = (scratch() / "nafta.csv").string();
  REQUIRE(cli::run(c, log) == 0);
  CHECK(slurp(c.output).find("\nsub5,1994-03-01,") != std::string::npos);

  c.nafta_date = "2050-01-01";
  CHECK(cli::run(c, log) == 1);
}

TEST_CASE("rolling subcommand: CSV layout and thread independence") {
  const auto prices = synthetic_prices(1200, 0.5, 9);
  auto c = base("rolling");
  c.input = prices.string();
  c.window = 500;
  c.step = 50;
  c.shuffles = 40;
  c.output = (scratch() / "rolling.csv").string();
  std::ostringstream log;
  REQUIRE(cli::run(c, log) == 0);
  const auto first = slurp(c.output);
  CHECK(first.find("\nend_date,H,q025,q975,flag,s_lo,s_hi\n") != std::string::npos);
  std::size_t rows = 0;
  std::istringstream in(first);
  for (std::string line; std::getline(in, line);)
    rows += !line.empty() && line[0] != '#' && line.rfind("end_date", 0) != 0;
  CHECK(rows == (1200 - 500) / 50 + 1);
  CHECK(log.str().find("rolling: 15/15 windows") != std::string::npos);

  c.threads = 3;
  REQUIRE(cli::run(c, log) == 0);
  CHECK(slurp(c.output) == first);

  c.format = "json";
  c.output = (scratch() / "rolling.json").string();
  REQUIRE(cli::run(c, log) == 0);
  const auto j = nlohmann::json::parse(slurp(c.output));
  CHECK(j["windows"].size() == rows);
  CHECK(j["windows"][0].contains("low_range"));
  CHECK(j["config"]["range"] == "auto");

  c.window = 100000;
  CHECK(cli::run(c, log) == 1);
}

TEST_CASE("config JSON round trip") {
  auto c = base("test");
  c.input = "x.csv";
  c.method = "dma";
  c.theta = 0.5;
  c.shuffles = 123;
  c.subseries = "gulf-iraq";
  c.gulf_date = "1992-08-02";
  const auto resolved = cli::resolve(c);
  const auto back = cli::resolve(cli::config_from_json(cli::to_json(resolved)));
  CHECK(cli::to_json(back) == cli::to_json(resolved));
  CHECK_FALSE(cli::to_json(resolved).contains("threads"));
}
