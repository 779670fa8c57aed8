// Command-line front end: analyze, test, rolling, synth.
#include <iostream>

#include <CLI11.hpp>

#include "dfadma/cli.hpp"
#include "dfadma/error.hpp"
#include "dfadma/serialize.hpp"

int main(int argc, char** argv) {
  using dfadma::cli::RunConfig;
  CLI::App app{"DFA/DMA scaling exponents and shuffle tests of weak-form efficiency"};
  app.set_version_flag("--version", dfadma::kVersion);
  app.require_subcommand(0, 1);

  RunConfig cfg;
  std::string replay;
  std::string replay_output;
  int shuffles = 0;
  app.add_option("--replay", replay, "Re-run the config embedded in an output artifact");
  app.add_option("--replay-output", replay_output, "Output path for --replay (default: as recorded)");
  app.add_option("--replay-threads", cfg.threads, "Worker threads for --replay");

  const auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("-i,--input", cfg.input, "Price CSV (date,price)");
    if (needs_input) in->required();
    sub->add_option("-o,--output", cfg.output, "Output path ('-' for stdout)")->capture_default_str();
    sub->add_option("--format", cfg.format, "csv | json")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Base random seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  };
  const auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "dfa | dma | bdma | cdma | fdma (| all for test)")
        ->capture_default_str();
    sub->add_option("--order", cfg.order, "DFA polynomial order")->capture_default_str();
    sub->add_option("--theta", cfg.theta, "DMA position parameter in [0,1]")->capture_default_str();
    sub->add_option("--density", cfg.density, "Scale grid points per decade")->capture_default_str();
    sub->add_option("--window-len", cfg.window_len, "Scaling-range search window (grid points)")
        ->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Fluctuation function and power-law fit");
  add_common(analyze, true);
  add_method(analyze);
  analyze->add_option("--range", cfg.range, "full | auto")->capture_default_str();
  analyze->add_option("--rss-scan", cfg.scan_output, "Write per-window fit residuals to this CSV");

  auto* test = app.add_subcommand("test", "Shuffle test of H = <H^s>");
  add_common(test, true);
  add_method(test);
  test->add_option("--range", cfg.range, "full | auto")->capture_default_str();
  test->add_option("--shuffles", shuffles, "Shuffled replicates (default 10000)");
  test->add_option("--subseries", cfg.subseries, "none | gulf-iraq | nafta | all")
      ->capture_default_str();
  test->add_option("--gulf-date", cfg.gulf_date)->capture_default_str();
  test->add_option("--iraq-date", cfg.iraq_date)->capture_default_str();
  test->add_option("--nafta-date", cfg.nafta_date)->capture_default_str();
  test->add_flag("--include-ensemble", cfg.include_ensemble, "Store every replicate exponent (json)");

  auto* rolling = app.add_subcommand("rolling", "Moving-window exponents with shuffle bands");
  add_common(rolling, true);
  add_method(rolling);
  rolling->add_option("--window", cfg.window, "Returns per window")->capture_default_str();
  rolling->add_option("--step", cfg.step, "Window advance in returns")->capture_default_str();
  rolling->add_option("--shuffles", shuffles, "Shuffled replicates per window (default 1000)");

  auto* synth = app.add_subcommand("synth", "Exact fractional Gaussian noise");
  add_common(synth, false);
  synth->add_option("-n,--length", cfg.n, "Number of samples")->capture_default_str();
  synth->add_option("--hurst", cfg.hurst, "Hurst exponent in (0,1)")->capture_default_str();
  synth->add_option("--sigma", cfg.sigma, "Standard deviation")->capture_default_str();
  synth->add_flag("--as-prices", cfg.as_prices, "Emit date,price rows (exponentiated cumsum)");
  synth->add_option("--start-price", cfg.start_price)->capture_default_str();
  synth->add_option("--start-date", cfg.start_date)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (!replay.empty()) {
    const auto threads = cfg.threads;
    try {
      cfg = dfadma::cli::config_from_artifact(replay);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    cfg.threads = threads;
    if (!replay_output.empty()) cfg.output = replay_output;
  } else {
    const auto* chosen = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (chosen == nullptr) {
      std::cerr << app.help();
      return 2;
    }
    cfg.subcommand = chosen->get_name();
    if (const auto* opt = chosen->get_option_no_throw("--shuffles"); opt != nullptr && opt->count() > 0)
      cfg.shuffles = shuffles;
  }
  return dfadma::cli::run(cfg, std::cerr);
}
