#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pricesim/distribution.hpp"
#include "pricesim/market.hpp"
#include "pricesim/pricing.hpp"

namespace pricesim {

/// One collective intervention applied to every category of a sweep cell.
/// alpha > 0 is a horizontal mixture at the config's floor; epsilon > 0 a
/// vertical shift on the config's target fraction; both zero is the baseline.
struct Intervention {
  double alpha = 0.0;
  double epsilon = 0.0;

  friend bool operator==(const Intervention&, const Intervention&) = default;
};

/// Experiment description read from a JSON file (comments allowed).
///
/// ```json
/// {
///   "experiment_id": "demo",
///   "families": [{"family": "uniform"}, {"family": "beta_a1", "a": 2}],
///   "M_grid": [50, 100, 200, 400],
///   "alpha_grid": [0, 0.5],
///   "floor": 0.2,
///   "epsilon_grid": [0.01],
///   "n_runs": 60,
///   "theta": 1.0,
///   "master_seed": 7
/// }
/// ```
struct ExperimentConfig {
  std::string experiment_id = "experiment";
  std::vector<ValuationDistribution> families;
  std::vector<std::size_t> m_grid;
  std::vector<double> alpha_grid{0.0};
  double floor = 0.2;
  std::vector<double> epsilon_grid;
  double target_fraction = 1.0;
  std::size_t n_runs = 60;
  double theta = 1.0;
  std::uint64_t master_seed = 1;
  Engine engine = Engine::GeometricJump;
  TieBreak tie_break = TieBreak::UniformAmongAccepting;
  std::uint64_t wait_cap = kDefaultWaitCap;
  std::string output_path;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// alpha_grid entries first (alpha = 0 is the baseline), then epsilon_grid.
  std::vector<Intervention> interventions() const;
};

/// Parses and validates. `source` prefixes diagnostics (file name); JSON syntax
/// errors report line and column.
ExperimentConfig parse_experiment_config(std::string_view text, const std::string& source = "config");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Bundled `paper-figures` grid: four families, alpha in
/// {0, 0.3, 0.5, 0.8} at floor 0.2, M from 50 to 3200, 60 runs each.
ExperimentConfig paper_figures_config();
std::string_view paper_figures_config_text();

/// Builds the market for one sweep cell. Vertical-budget warnings are appended
/// to `warnings` when given.
MarketConfig build_market(const ExperimentConfig& cfg, const ValuationDistribution& family,
                          std::size_t m, const Intervention& iv,
                          std::vector<std::string>* warnings = nullptr);

/// Single-simulation settings for the `simulate` subcommand.
struct SimulateOptions {
  ValuationDistribution family = ValuationDistribution::uniform();
  std::size_t m = 1;
  PricingStrategy strategy = PricingStrategy::sws();
  double alpha = 0.0;
  double floor = 0.2;
  double epsilon = 0.0;
  double target_fraction = 1.0;
  std::uint64_t seed = 1;
  Engine engine = Engine::GeometricJump;
  TieBreak tie_break = TieBreak::UniformAmongAccepting;
  std::uint64_t wait_cap = kDefaultWaitCap;

  void validate() const;
};

/// JSON form: {"family": {...}, "M": 100, "strategy": {"strategy": "sws", "theta": 1},
/// "seed": 7, "collective": {"collective": "horizontal", "alpha": 0.5, "floor": 0.2}}.
SimulateOptions parse_simulate_config(std::string_view text, const std::string& source = "config");

MarketConfig build_market(const SimulateOptions& opts, std::vector<std::string>* warnings = nullptr);

/// `sws`, `sws:<theta>`, `fixed:<price>`, `floor_optimal:<q>`.
PricingStrategy parse_strategy_spec(std::string_view text);
PricingStrategy strategy_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json to_json(const PricingStrategy& s);

Engine parse_engine(std::string_view text);
TieBreak parse_tie_break(std::string_view text);

}  // namespace pricesim
