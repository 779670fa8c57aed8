#include "dfadma/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "dfadma/error.hpp"
#include "dfadma/rolling.hpp"
#include "dfadma/serialize.hpp"
#include "dfadma/shuffletest.hpp"
#include "dfadma/synth.hpp"
#include "dfadma/timeseries.hpp"

namespace dfadma::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Output sink that only becomes visible on commit(): a sibling temp file
/// renamed over the target, or a buffer flushed to stdout for "-".
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string path) : path_(std::move(path)) {}
  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;
  ~ArtifactWriter() {
    if (!committed_ && !tmp_.empty()) std::filesystem::remove(tmp_);
  }

  std::ostream& stream() { return buffer_; }

  void commit() {
    if (path_ == "-") {
      std::cout << buffer_.str() << std::flush;
      committed_ = true;
      return;
    }
    tmp_ = path_ + ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp_, std::ios::binary | std::ios::trunc);
      if (!out) throw ConfigError("cannot open output file '" + tmp_ + "'");
      out << buffer_.str();
      out.flush();
      if (!out) throw ConfigError("failed writing '" + tmp_ + "'");
    }
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ostringstream buffer_;
  bool committed_ = false;
};

Date require_date(const std::string& text, const char* what) {
  const auto d = parse_date(text);
  if (!d) throw ConfigError(std::string("invalid ") + what + " '" + text + "'");
  return *d;
}

void write_csv_preamble(std::ostream& out, const RunConfig& config) {
  out << "# dfadma " << kVersion << '\n';
  out << "# config: " << to_json(config).dump() << '\n';
}

Json json_header(const RunConfig& config) {
  Json j;
  j["schema"] = "dfadma." + config.subcommand + "/1";
  j["version"] = kVersion;
  j["config"] = to_json(config);
  return j;
}

Json input_summary(const RunConfig& config, const LoadResult& loaded) {
  Json j;
  j["path"] = config.input;
  j["n_prices"] = loaded.series.size();
  j["dropped"] = loaded.dropped;
  j["first_date"] = format_date(loaded.series.front_date());
  j["last_date"] = format_date(loaded.series.back_date());
  return j;
}

Method single_method(const RunConfig& config) {
  const auto ms = methods(config);
  if (ms.size() != 1)
    throw ConfigError("subcommand '" + config.subcommand + "' takes a single method");
  return ms.front();
}

struct Segment {
  std::string label;
  PriceSeries series;
};

std::vector<Segment> segments(const RunConfig& config, const PriceSeries& p) {
  std::vector<Segment> out;
  const auto add_split = [&](std::vector<Date> cuts, int first_label) {
    auto parts = split_by_dates(p, cuts);
    for (std::size_t k = 0; k < parts.size(); ++k)
      out.push_back({"sub" + std::to_string(first_label + static_cast<int>(k)), std::move(parts[k])});
  };
  const auto gulf_iraq = [&] {
    add_split({require_date(config.gulf_date, "gulf date"), require_date(config.iraq_date, "iraq date")}, 1);
  };
  const auto nafta = [&] { add_split({require_date(config.nafta_date, "nafta date")}, 4); };

  if (config.subseries == "none" || config.subseries == "all") out.push_back({"whole", p});
  if (config.subseries == "gulf-iraq" || config.subseries == "all") gulf_iraq();
  if (config.subseries == "nafta" || config.subseries == "all") nafta();
  return out;
}

int run_analyze(const RunConfig& config, std::ostream& log) {
  const auto loaded = load_prices_file(config.input);
  const auto returns = log_returns(loaded.series);
  const auto grid = default_scales(returns.size(), config.density);
  const auto ff = fluctuation(profile(returns), grid, single_method(config));
  const auto range = resolve_range(ff, range_policy(config));
  const auto fit = fit_power_law(ff, range);
  const auto rel = exponent_relations(fit.H);

  if (!config.scan_output.empty()) {
    ArtifactWriter scan(config.scan_output);
    write_csv_preamble(scan.stream(), config);
    const auto scans = scan_fitting_windows(ff, config.window_len);
    write_scan_csv(scan.stream(), scans);
    scan.commit();
  }

  ArtifactWriter out(config.output);
  if (config.format == "json") {
    auto j = json_header(config);
    j["input"] = input_summary(config, loaded);
    j["fluctuation"] = to_json(ff);
    j["fit"] = to_json(fit);
    j["relations"] = {{"eta", rel.eta}, {"gamma", rel.gamma}};
    out.stream() << j.dump(2) << '\n';
  } else {
    write_csv_preamble(out.stream(), config);
    out.stream() << "# fit: " << to_json(fit).dump() << '\n';
    write_fluctuation_csv(out.stream(), ff);
  }
  out.commit();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s H=%.4f +/- %.4f over s in [%ld, %ld] (%ld points)",
                ff.method.c_str(), fit.H, fit.std_error, static_cast<long>(fit.range.lo),
                static_cast<long>(fit.range.hi), static_cast<long>(fit.n_points));
  log << buf << '\n';
  return 0;
}

int run_test(const RunConfig& config, std::ostream& log) {
  const auto loaded = load_prices_file(config.input);
  const auto segs = segments(config, loaded.series);
  const auto ms = methods(config);
  ShuffleTestOptions options;
  options.n_replicates = *config.shuffles;
  options.seed = config.seed;
  options.threads = config.threads;

  struct Row {
    const Segment* segment;
    Eigen::Index n_returns;
    ShuffleTestResult result;
  };
  std::vector<Row> rows;
  for (const auto& seg : segs) {
    const auto returns = log_returns(seg.series);
    const auto grid = default_scales(returns.size(), config.density);
    for (const auto& m : ms) {
      rows.push_back({&seg, returns.size(),
                      efficiency_test(returns, m, grid, range_policy(config), options)});
      log << seg.label << "  " << summary_line(rows.back().result) << '\n';
    }
  }

  ArtifactWriter out(config.output);
  if (config.format == "json") {
    auto j = json_header(config);
    j["input"] = input_summary(config, loaded);
    Json results = Json::array();
    for (const auto& row : rows) {
      Json r;
      r["segment"] = row.segment->label;
      r["first_date"] = format_date(row.segment->series.front_date());
      r["last_date"] = format_date(row.segment->series.back_date());
      r["n_returns"] = row.n_returns;
      r.update(to_json(row.result, config.include_ensemble));
      results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    out.stream() << j.dump(2) << '\n';
  } else {
    write_csv_preamble(out.stream(), config);
    out.stream() << "segment,first_date,last_date,n_returns,method,H,stderr,s_lo,s_hi,mean_hs,p,"
                    "q025,q975,n_replicates,redraws,rejected\n";
    for (const auto& row : rows) {
      const auto& r = row.result;
      out.stream() << row.segment->label << ',' << format_date(row.segment->series.front_date())
                   << ',' << format_date(row.segment->series.back_date()) << ',' << row.n_returns
                   << ',' << r.method << ',' << format_number(r.fit.H) << ','
                   << format_number(r.fit.std_error) << ',' << r.range.lo << ',' << r.range.hi
                   << ',' << format_number(r.mean_hs) << ',' << format_number(r.p) << ','
                   << format_number(r.q025) << ',' << format_number(r.q975) << ','
                   << r.n_replicates << ',' << r.redraws << ',' << (r.rejected ? 1 : 0) << '\n';
    }
  }
  out.commit();
  return 0;
}

int run_rolling(const RunConfig& config, std::ostream& log) {
  const auto loaded = load_prices_file(config.input);
  RollingOptions options;
  options.window_size = config.window;
  options.step = config.step;
  options.n_shuffles = *config.shuffles;
  options.window_len = config.window_len;
  options.points_per_decade = config.density;
  options.seed = config.seed;
  options.threads = config.threads;

  std::size_t last_decile = 0;
  const auto windows = rolling_analysis(
      loaded.series, single_method(config), options, [&](std::size_t done, std::size_t total) {
        const auto decile = done * 10 / total;
        if (decile > last_decile || done == total) {
          last_decile = decile;
          log << "rolling: " << done << '/' << total << " windows\n";
        }
      });

  std::size_t above = 0, below = 0, low = 0;
  for (const auto& w : windows) {
    above += w.flag == BandFlag::Above;
    below += w.flag == BandFlag::Below;
    low += w.low_range;
  }

  ArtifactWriter out(config.output);
  if (config.format == "json") {
    auto j = json_header(config);
    j["input"] = input_summary(config, loaded);
    j["summary"] = {{"windows", windows.size()},
                    {"above", above},
                    {"below", below},
                    {"low_range", low}};
    Json ws = Json::array();
    for (const auto& w : windows) ws.push_back(to_json(w));
    j["windows"] = std::move(ws);
    out.stream() << j.dump(2) << '\n';
  } else {
    write_csv_preamble(out.stream(), config);
    out.stream() << "# low_range_windows: " << low << '\n';
    write_rolling_csv(out.stream(), windows);
  }
  out.commit();
  log << windows.size() << " windows: " << above << " above band, " << below
      << " below band, " << low << " with scaling range below s=" << kLowRangeScale << '\n';
  return 0;
}

int run_synth(const RunConfig& config, std::ostream& log) {
  const auto values = generate_fgn({config.n, config.hurst, config.sigma, config.seed});
  ArtifactWriter out(config.output);
  if (config.as_prices) {
    const auto prices =
        prices_from_returns(values, config.start_price, require_date(config.start_date, "start date"));
    if (config.format == "json") {
      auto j = json_header(config);
      std::vector<std::string> dates;
      for (const auto& d : prices.dates()) dates.push_back(format_date(d));
      j["dates"] = dates;
      j["prices"] = prices.prices();
      out.stream() << j.dump(2) << '\n';
    } else {
      write_csv_preamble(out.stream(), config);
      out.stream() << "date,price\n";
      for (std::size_t i = 0; i < prices.size(); ++i)
        out.stream() << format_date(prices.dates()[i]) << ',' << format_number(prices.prices()[i])
                     << '\n';
    }
  } else if (config.format == "json") {
    auto j = json_header(config);
    j["values"] = std::vector<double>(values.data(), values.data() + values.size());
    out.stream() << j.dump(2) << '\n';
  } else {
    write_csv_preamble(out.stream(), config);
    out.stream() << "t,value\n";
    for (Eigen::Index i = 0; i < values.size(); ++i)
      out.stream() << i << ',' << format_number(values(i)) << '\n';
  }
  out.commit();
  log << "synth: " << config.n << " fGn samples, H=" << config.hurst << '\n';
  return 0;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& field) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) field = it->get<T>();
}

}  // namespace

RunConfig resolve(RunConfig c) {
  const auto one_of = [](const std::string& v, std::initializer_list<const char*> options) {
    for (const auto* o : options)
      if (v == o) return true;
    return false;
  };
  if (!one_of(c.subcommand, {"analyze", "test", "rolling", "synth"}))
    throw ConfigError("unknown subcommand '" + c.subcommand + "'");
  if (!one_of(c.format, {"csv", "json"})) throw ConfigError("format must be csv or json");
  if (c.method == "bdma" || c.method == "cdma" || c.method == "fdma") {
    c.theta = c.method == "bdma" ? 0.0 : (c.method == "cdma" ? 0.5 : 1.0);
    c.method = "dma";
  }
  if (!one_of(c.method, {"dfa", "dma", "all"}))
    throw ConfigError("method must be dfa, dma, bdma, cdma, fdma or all");
  if (c.method == "all" && c.subcommand != "test")
    throw ConfigError("method 'all' is only available for the test subcommand");
  if (!one_of(c.range, {"full", "auto"})) throw ConfigError("range must be full or auto");
  if (!one_of(c.subseries, {"none", "gulf-iraq", "nafta", "all"}))
    throw ConfigError("subseries must be none, gulf-iraq, nafta or all");
  if (c.subcommand == "rolling") c.range = "auto";
  if (!c.shuffles) {
    if (c.subcommand == "test") c.shuffles = 10000;
    if (c.subcommand == "rolling") c.shuffles = 1000;
  }
  if (c.shuffles && *c.shuffles < 1) throw ConfigError("shuffles must be >= 1");
  if (c.subcommand != "test" && c.subcommand != "rolling") c.shuffles.reset();
  if (c.order < 1) throw ConfigError("DFA order must be >= 1");
  if (!(c.theta >= 0.0 && c.theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  if (c.density < 1) throw ConfigError("density must be >= 1");
  if (c.window_len < 2) throw ConfigError("window-len must be >= 2");
  if (c.step < 1) throw ConfigError("step must be >= 1");
  if (c.window < 1) throw ConfigError("window must be >= 1");
  if (c.subcommand != "synth" && c.input.empty()) throw ConfigError("an input file is required");
  for (const auto* d : {&c.gulf_date, &c.iraq_date, &c.nafta_date, &c.start_date})
    require_date(*d, "date");
  return c;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  if (c.subcommand == "synth") {
    j["n"] = c.n;
    j["hurst"] = c.hurst;
    j["sigma"] = c.sigma;
    j["as_prices"] = c.as_prices;
    j["start_price"] = c.start_price;
    j["start_date"] = c.start_date;
  } else {
    j["input"] = c.input;
    j["method"] = c.method;
    j["order"] = c.order;
    j["theta"] = c.theta;
    j["density"] = c.density;
    j["range"] = c.range;
    j["window_len"] = c.window_len;
  }
  if (c.subcommand == "analyze") j["scan_output"] = c.scan_output;
  if (c.subcommand == "test") {
    j["shuffles"] = *c.shuffles;
    j["subseries"] = c.subseries;
    j["gulf_date"] = c.gulf_date;
    j["iraq_date"] = c.iraq_date;
    j["nafta_date"] = c.nafta_date;
    j["include_ensemble"] = c.include_ensemble;
  }
  if (c.subcommand == "rolling") {
    j["shuffles"] = *c.shuffles;
    j["window"] = c.window;
    j["step"] = c.step;
  }
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  read_field(j, "subcommand", c.subcommand);
  read_field(j, "input", c.input);
  read_field(j, "output", c.output);
  read_field(j, "format", c.format);
  read_field(j, "method", c.method);
  read_field(j, "order", c.order);
  read_field(j, "theta", c.theta);
  read_field(j, "density", c.density);
  read_field(j, "range", c.range);
  read_field(j, "window_len", c.window_len);
  if (const auto it = j.find("shuffles"); it != j.end() && !it->is_null())
    c.shuffles = it->get<int>();
  read_field(j, "window", c.window);
  read_field(j, "step", c.step);
  read_field(j, "subseries", c.subseries);
  read_field(j, "gulf_date", c.gulf_date);
  read_field(j, "iraq_date", c.iraq_date);
  read_field(j, "nafta_date", c.nafta_date);
  read_field(j, "include_ensemble", c.include_ensemble);
  read_field(j, "scan_output", c.scan_output);
  read_field(j, "n", c.n);
  read_field(j, "hurst", c.hurst);
  read_field(j, "sigma", c.sigma);
  read_field(j, "as_prices", c.as_prices);
  read_field(j, "start_price", c.start_price);
  read_field(j, "start_date", c.start_date);
  read_field(j, "seed", c.seed);
  return c;
}

RunConfig config_from_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open artifact '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("# ", 0) == 0) {
    do {
      constexpr std::string_view tag = "# config: ";
      if (line.rfind(tag, 0) == 0) return config_from_json(nlohmann::json::parse(line.substr(tag.size())));
    } while (std::getline(in, line) && line.rfind("#", 0) == 0);
    throw FormatError("artifact '" + path + "' has no '# config:' line");
  }
  std::stringstream rest;
  rest << line << '\n' << in.rdbuf();
  const auto j = nlohmann::json::parse(rest.str());
  if (!j.contains("config")) throw FormatError("artifact '" + path + "' has no config object");
  return config_from_json(j["config"]);
}

std::vector<Method> methods(const RunConfig& c) {
  if (c.method == "dfa") return {DfaMethod{c.order}};
  if (c.method == "dma") return {DmaMethod{c.theta}};
  if (c.method == "all")
    return {DmaMethod{0.0}, DmaMethod{0.5}, DmaMethod{1.0}, DfaMethod{c.order}};
  throw ConfigError("unknown method '" + c.method + "'");
}

RangePolicy range_policy(const RunConfig& c) {
  return c.range == "auto" ? RangePolicy::automatic(c.window_len) : RangePolicy::full();
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    const auto c = resolve(config);
    if (c.subcommand == "analyze") return run_analyze(c, log);
    if (c.subcommand == "test") return run_test(c, log);
    if (c.subcommand == "rolling") return run_rolling(c, log);
    return run_synth(c, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    log << "error: " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace dfadma::cli
