// pricesim: single simulations, parameter sweeps and regime classification.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pricesim/classify.hpp"
#include "pricesim/config.hpp"
#include "pricesim/distribution_io.hpp"
#include "pricesim/errors.hpp"
#include "pricesim/simulate.hpp"
#include "pricesim/sweep.hpp"

namespace {

using namespace pricesim;

constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to `path`, or stdout when empty.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  write(out);
  if (!out) throw ConfigError(path + ": write failed");
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string trace;
  std::optional<std::string> family;
  std::optional<std::size_t> m;
  std::optional<std::string> strategy;
  std::optional<double> theta;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;
  std::optional<std::string> tie_break;
  std::optional<double> alpha;
  std::optional<double> floor;
  std::optional<double> epsilon;
  std::optional<double> target_fraction;
  std::optional<std::uint64_t> wait_cap;
};

struct SweepArgs {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;
};

struct ClassifyArgs {
  std::string csv;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  SimulateOptions opts;
  if (!a.config.empty()) opts = parse_simulate_config(read_file(a.config), a.config);
  if (a.family) opts.family = parse_family_spec(*a.family);
  if (a.m) opts.m = *a.m;
  if (a.strategy) opts.strategy = parse_strategy_spec(*a.strategy);
  if (a.theta) {
    if (opts.strategy.kind() != StrategyKind::Sws) {
      throw ConfigError("--theta only applies to the sws strategy");
    }
    opts.strategy = PricingStrategy::sws(*a.theta);
  }
  if (a.seed) opts.seed = *a.seed;
  if (a.engine) opts.engine = parse_engine(*a.engine);
  if (a.tie_break) opts.tie_break = parse_tie_break(*a.tie_break);
  if (a.alpha) opts.alpha = *a.alpha;
  if (a.floor) opts.floor = *a.floor;
  if (a.epsilon) opts.epsilon = *a.epsilon;
  if (a.target_fraction) opts.target_fraction = *a.target_fraction;
  if (a.wait_cap) opts.wait_cap = *a.wait_cap;

  std::vector<std::string> warnings;
  const MarketConfig market = build_market(opts, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  RandomStream rng(opts.seed);
  const SimulationTrace trace = run(market, rng);
  if (!a.trace.empty()) {
    emit(a.trace, [&](std::ostream& os) { write_trace_csv(os, trace); });
  }
  const auto summary = simulation_summary(opts, market, trace, warnings);
  emit(a.out, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  return 0;
}

int sweep_with(ExperimentConfig cfg, const SweepArgs& a) {
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.engine) cfg.engine = parse_engine(*a.engine);
  if (a.threads < 0) throw ConfigError("--threads must be nonnegative");
  const std::string out = a.out.empty() ? cfg.output_path : a.out;

  const SweepResult result = run_sweep(cfg, a.threads);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  emit(out, [&](std::ostream& os) { write_sweep_csv(os, result.rows); });
  if (const auto failed = result.failures(); failed > 0) {
    std::cerr << "warning: " << failed << " of " << result.rows.size()
              << " runs failed; see the error column\n";
  }
  return 0;
}

int cmd_classify(const ClassifyArgs& a) {
  std::ifstream in(a.csv);
  if (!in) throw ConfigError(a.csv + ": cannot open");
  const auto rows = read_sweep_csv(in, a.csv);
  const auto cells = classify_sweep(rows);
  emit(a.out, [&](std::ostream& os) { os << regime_report(cells).dump(2) << '\n'; });
  int code = 0;
  for (const auto& c : cells) {
    if (c.fit) continue;
    std::cerr << "error: " << c.family << " [" << c.params << "] alpha=" << c.alpha
              << " epsilon=" << c.epsilon << ": " << c.error << '\n';
    code = kExitConfig;
  }
  if (cells.empty()) {
    std::cerr << "error: " << a.csv << ": no rows\n";
    code = kExitConfig;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posted-price procurement market simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one market simulation and print a JSON summary");
  simulate->add_option("--config", sim.config, "JSON simulation config");
  simulate->add_option("--out", sim.out, "Summary JSON path (default stdout)");
  simulate->add_option("--emit-trace", sim.trace, "Write the per-iteration trace CSV here");
  simulate->add_option("--family", sim.family, "uniform, beta_a1:A, beta_1b:B, trunc_exp:L, pointmass:P, gap_shifted:G");
  simulate->add_option("--M", sim.m, "Number of categories");
  simulate->add_option("--strategy", sim.strategy, "sws[:theta], fixed:P, floor_optimal:Q");
  simulate->add_option("--theta", sim.theta, "SWS parameter in (0,1]");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--engine", sim.engine, "direct or geometric")
      ->check(CLI::IsMember({"direct", "geometric"}));
  simulate->add_option("--tie-break", sim.tie_break, "uniform, lowest_index or max_margin");
  simulate->add_option("--alpha", sim.alpha, "Horizontal collective share");
  simulate->add_option("--floor", sim.floor, "Horizontal collective price floor");
  simulate->add_option("--epsilon", sim.epsilon, "Vertical collective budget");
  simulate->add_option("--target-fraction", sim.target_fraction, "Share of categories targeted vertically");
  simulate->add_option("--wait-cap", sim.wait_cap, "Maximum arrivals per iteration");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a config-driven sweep and write the CSV");
  sweep->add_option("--config", sweep_args.config, "JSON experiment config")->required();
  sweep->add_option("--out", sweep_args.out, "CSV path (default: output_path, else stdout)");
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = OpenMP default)");
  sweep->add_option("--seed", sweep_args.seed, "Override master_seed");
  sweep->add_option("--engine", sweep_args.engine, "direct or geometric")
      ->check(CLI::IsMember({"direct", "geometric"}));

  SweepArgs bundled_args;
  auto* bundled = app.add_subcommand("paper-figures", "Sweep with the bundled cost / wait grid");
  bundled->add_option("--out", bundled_args.out, "CSV path (default stdout)");
  bundled->add_option("--threads", bundled_args.threads, "Worker threads (0 = OpenMP default)");
  bundled->add_option("--seed", bundled_args.seed, "Override master_seed");
  bundled->add_option("--engine", bundled_args.engine, "direct or geometric")
      ->check(CLI::IsMember({"direct", "geometric"}));
  bool dump_config = false;
  bundled->add_flag("--print-config", dump_config, "Print the bundled config and exit");

  ClassifyArgs cls;
  auto* classify = app.add_subcommand("classify", "Fit cost regimes to a sweep CSV");
  classify->add_option("csv", cls.csv, "Sweep CSV")->required();
  classify->add_option("--out", cls.out, "Report JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (sweep->parsed()) return sweep_with(load_experiment_config(sweep_args.config), sweep_args);
    if (bundled->parsed()) {
      if (dump_config) {
        std::cout << paper_figures_config_text() << '\n';
        return 0;
      }
      return sweep_with(paper_figures_config(), bundled_args);
    }
    if (classify->parsed()) return cmd_classify(cls);
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << '\n';
    return kExitSimulation;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
