#include "pricesim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pricesim/collective.hpp"
#include "pricesim/distribution_io.hpp"
#include "pricesim/errors.hpp"

namespace pricesim {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error: " + e.what());
  }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_number_unsigned()) {
    throw ConfigError(where + ": field '" + key + "' must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
  return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": field '" + key + "' must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], key + "[" + std::to_string(i) + "]", where));
  }
  return out;
}

template <typename F>
auto config_guard(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (families.empty()) throw ConfigError("field 'families': must be nonempty");
  if (m_grid.empty()) throw ConfigError("field 'M_grid': must be nonempty");
  for (const auto m : m_grid) {
    if (m == 0) throw ConfigError("field 'M_grid': entries must be positive");
  }
  if (alpha_grid.empty() && epsilon_grid.empty()) {
    throw ConfigError("field 'alpha_grid': no interventions (alpha_grid and epsilon_grid both empty)");
  }
  for (const double a : alpha_grid) {
    if (!(a >= 0.0 && a < 1.0)) throw ConfigError("field 'alpha_grid': entries must lie in [0,1)");
  }
  for (const double e : epsilon_grid) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("field 'epsilon_grid': entries must lie in (0,1)");
  }
  if (!(floor > 0.0 && floor <= 1.0)) throw ConfigError("field 'floor': must lie in (0,1]");
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw ConfigError("field 'target_fraction': must lie in (0,1]");
  }
  if (n_runs < 1) throw ConfigError("field 'n_runs': must be at least 1");
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("field 'theta': must lie in (0,1]");
  const auto max_m = *std::max_element(m_grid.begin(), m_grid.end());
  if (wait_cap < max_m) throw ConfigError("field 'wait_cap': must be at least max(M_grid)");
}

std::vector<Intervention> ExperimentConfig::interventions() const {
  std::vector<Intervention> out;
  for (const double a : alpha_grid) out.push_back({a, 0.0});
  for (const double e : epsilon_grid) out.push_back({0.0, e});
  return out;
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::string& source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) throw ConfigError(source + ": top level must be an object");
  reject_unknown_keys(j,
                      {"experiment_id", "families", "M_grid", "alpha_grid", "floor", "epsilon_grid",
                       "target_fraction", "n_runs", "theta", "master_seed", "engine", "tie_break",
                       "wait_cap", "output_path"},
                      source);

  ExperimentConfig cfg;
  try {
    if (j.contains("experiment_id")) cfg.experiment_id = get_string(j["experiment_id"], "experiment_id", source);
    if (!j.contains("families") || !j["families"].is_array()) {
      throw ConfigError("field 'families': missing or not an array");
    }
    for (std::size_t i = 0; i < j["families"].size(); ++i) {
      cfg.families.push_back(
          distribution_from_json(j["families"][i], "families[" + std::to_string(i) + "]"));
    }
    if (!j.contains("M_grid") || !j["M_grid"].is_array()) {
      throw ConfigError("field 'M_grid': missing or not an array");
    }
    for (std::size_t i = 0; i < j["M_grid"].size(); ++i) {
      cfg.m_grid.push_back(get_unsigned(j["M_grid"][i], "M_grid[" + std::to_string(i) + "]", source));
    }
    if (j.contains("alpha_grid")) cfg.alpha_grid = get_number_list(j["alpha_grid"], "alpha_grid", source);
    if (j.contains("epsilon_grid")) {
      cfg.epsilon_grid = get_number_list(j["epsilon_grid"], "epsilon_grid", source);
    }
    if (j.contains("floor")) cfg.floor = get_number(j["floor"], "floor", source);
    if (j.contains("target_fraction")) {
      cfg.target_fraction = get_number(j["target_fraction"], "target_fraction", source);
    }
    if (j.contains("n_runs")) cfg.n_runs = get_unsigned(j["n_runs"], "n_runs", source);
    if (j.contains("theta")) cfg.theta = get_number(j["theta"], "theta", source);
    if (j.contains("master_seed")) cfg.master_seed = get_unsigned(j["master_seed"], "master_seed", source);
    if (j.contains("engine")) cfg.engine = parse_engine(get_string(j["engine"], "engine", source));
    if (j.contains("tie_break")) {
      cfg.tie_break = parse_tie_break(get_string(j["tie_break"], "tie_break", source));
    }
    if (j.contains("wait_cap")) cfg.wait_cap = get_unsigned(j["wait_cap"], "wait_cap", source);
    if (j.contains("output_path")) cfg.output_path = get_string(j["output_path"], "output_path", source);
    cfg.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(source, 0) == 0) throw;
    throw ConfigError(source + ": " + msg);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.string());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment_id"] = cfg.experiment_id;
  j["families"] = json::array();
  for (const auto& f : cfg.families) j["families"].push_back(to_json(f));
  j["M_grid"] = cfg.m_grid;
  j["alpha_grid"] = cfg.alpha_grid;
  j["floor"] = cfg.floor;
  j["epsilon_grid"] = cfg.epsilon_grid;
  j["target_fraction"] = cfg.target_fraction;
  j["n_runs"] = cfg.n_runs;
  j["theta"] = cfg.theta;
  j["master_seed"] = cfg.master_seed;
  j["engine"] = to_string(cfg.engine);
  j["tie_break"] = to_string(cfg.tie_break);
  j["wait_cap"] = cfg.wait_cap;
  if (!cfg.output_path.empty()) j["output_path"] = cfg.output_path;
  return j;
}

std::string_view paper_figures_config_text() {
  return R"({
  "experiment_id": "paper-figures",
  "families": [
    {"family": "beta_a1", "a": 0.5},
    {"family": "uniform"},
    {"family": "trunc_exp", "lambda": 3},
    {"family": "beta_a1", "a": 2}
  ],
  "M_grid": [50, 100, 200, 400, 800, 1600, 3200],
  "alpha_grid": [0, 0.3, 0.5, 0.8],
  "floor": 0.2,
  "n_runs": 60,
  "theta": 1.0,
  "master_seed": 20240601,
  "engine": "geometric",
  "tie_break": "uniform"
})";
}

ExperimentConfig paper_figures_config() {
  return parse_experiment_config(paper_figures_config_text(), "paper-figures");
}

namespace {

MarketConfig apply_intervention(std::vector<ValuationDistribution> ds, double alpha, double floor,
                                double epsilon, double target_fraction,
                                std::vector<std::string>* warnings) {
  const std::size_t m = ds.size();
  MarketConfig market;
  if (alpha > 0.0) {
    market.distributions = apply_horizontal(HorizontalPlan::broadcast(alpha, floor, m), ds);
  } else if (epsilon > 0.0) {
    auto outcome = apply_vertical(VerticalPlan::first_fraction(epsilon, target_fraction, m), ds);
    market.distributions = std::move(outcome.distributions);
    if (warnings != nullptr && !outcome.warnings.empty()) {
      warnings->push_back(outcome.warnings.front() +
                          (outcome.warnings.size() > 1
                               ? " (and " + std::to_string(outcome.warnings.size() - 1) + " more)"
                               : ""));
    }
  } else {
    market.distributions = std::move(ds);
  }
  return market;
}

}  // namespace

MarketConfig build_market(const ExperimentConfig& cfg, const ValuationDistribution& family,
                          std::size_t m, const Intervention& iv, std::vector<std::string>* warnings) {
  MarketConfig market =
      apply_intervention(std::vector<ValuationDistribution>(m, family), iv.alpha, cfg.floor,
                         iv.epsilon, cfg.target_fraction, warnings);
  market.strategy = PricingStrategy::sws(cfg.theta);
  market.tie_break = cfg.tie_break;
  market.wait_cap = cfg.wait_cap;
  market.engine = cfg.engine;
  return market;
}

void SimulateOptions::validate() const {
  if (m < 1) throw ConfigError("field 'M': must be at least 1");
  if (alpha > 0.0 && epsilon > 0.0) {
    throw ConfigError("field 'collective': choose horizontal (alpha) or vertical (epsilon), not both");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("field 'alpha': must lie in [0,1)");
  if (alpha > 0.0 && !(floor > 0.0 && floor <= 1.0)) throw ConfigError("field 'floor': must lie in (0,1]");
  if (epsilon != 0.0 && !(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("field 'epsilon': must lie in (0,1)");
  }
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw ConfigError("field 'target_fraction': must lie in (0,1]");
  }
  if (wait_cap < m) throw ConfigError("field 'wait_cap': must be at least M");
}

SimulateOptions parse_simulate_config(std::string_view text, const std::string& source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) throw ConfigError(source + ": top level must be an object");
  reject_unknown_keys(j, {"family", "M", "strategy", "seed", "engine", "tie_break", "wait_cap", "collective"},
                      source);
  SimulateOptions opts;
  try {
    if (!j.contains("family")) throw ConfigError("field 'family': missing");
    opts.family = distribution_from_json(j["family"], "family");
    if (!j.contains("M")) throw ConfigError("field 'M': missing");
    opts.m = get_unsigned(j["M"], "M", source);
    if (j.contains("strategy")) opts.strategy = strategy_from_json(j["strategy"], "strategy");
    if (j.contains("seed")) opts.seed = get_unsigned(j["seed"], "seed", source);
    if (j.contains("engine")) opts.engine = parse_engine(get_string(j["engine"], "engine", source));
    if (j.contains("tie_break")) {
      opts.tie_break = parse_tie_break(get_string(j["tie_break"], "tie_break", source));
    }
    if (j.contains("wait_cap")) opts.wait_cap = get_unsigned(j["wait_cap"], "wait_cap", source);
    if (j.contains("collective")) {
      const json& c = j["collective"];
      if (!c.is_object() || !c.contains("collective")) {
        throw ConfigError("field 'collective': expected {\"collective\": \"horizontal\"|\"vertical\", ...}");
      }
      const std::string kind = get_string(c["collective"], "collective.collective", source);
      if (kind == "horizontal") {
        reject_unknown_keys(c, {"collective", "alpha", "floor"}, "field 'collective'");
        opts.alpha = get_number(c.value("alpha", json()), "collective.alpha", source);
        if (c.contains("floor")) opts.floor = get_number(c["floor"], "collective.floor", source);
      } else if (kind == "vertical") {
        reject_unknown_keys(c, {"collective", "epsilon", "target_fraction"}, "field 'collective'");
        opts.epsilon = get_number(c.value("epsilon", json()), "collective.epsilon", source);
        if (c.contains("target_fraction")) {
          opts.target_fraction = get_number(c["target_fraction"], "collective.target_fraction", source);
        }
      } else {
        throw ConfigError("field 'collective.collective': unknown kind '" + kind + "'");
      }
    }
    opts.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(source, 0) == 0) throw;
    throw ConfigError(source + ": " + msg);
  }
  return opts;
}

MarketConfig build_market(const SimulateOptions& opts, std::vector<std::string>* warnings) {
  opts.validate();
  MarketConfig market = config_guard("collective", [&] {
    return apply_intervention(std::vector<ValuationDistribution>(opts.m, opts.family), opts.alpha,
                              opts.floor, opts.epsilon, opts.target_fraction, warnings);
  });
  market.strategy = opts.strategy;
  market.tie_break = opts.tie_break;
  market.wait_cap = opts.wait_cap;
  market.engine = opts.engine;
  return market;
}

PricingStrategy parse_strategy_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  double value = 0.0;
  const bool has_value = colon != std::string_view::npos;
  if (has_value) {
    const std::string_view num = text.substr(colon + 1);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
      throw ConfigError("strategy '" + std::string(text) + "': bad numeric parameter");
    }
  }
  const std::string where = "strategy '" + std::string(text) + "'";
  return config_guard(where, [&] {
    if (name == "sws") return PricingStrategy::sws(has_value ? value : 1.0);
    if (!has_value) throw ConfigError(where + ": expected '" + std::string(name) + ":<value>'");
    if (name == "fixed") return PricingStrategy::fixed(value);
    if (name == "floor_optimal" || name == "success_floor_optimal") {
      return PricingStrategy::success_floor_optimal(value);
    }
    throw ConfigError("unknown strategy '" + std::string(name) + "'");
  });
}

PricingStrategy strategy_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("strategy") || !j["strategy"].is_string()) {
    throw ConfigError("field '" + where + "': expected {\"strategy\": \"sws\"|\"fixed\"|\"success_floor_optimal\", ...}");
  }
  const std::string kind = j["strategy"].get<std::string>();
  return config_guard("field '" + where + "'", [&] {
    if (kind == "sws") {
      return PricingStrategy::sws(j.contains("theta") ? get_number(j["theta"], "theta", where) : 1.0);
    }
    if (kind == "fixed") return PricingStrategy::fixed(get_number(j.value("price", json()), "price", where));
    if (kind == "success_floor_optimal") {
      return PricingStrategy::success_floor_optimal(
          get_number(j.value("q_target", json()), "q_target", where));
    }
    throw ConfigError("field '" + where + ".strategy': unknown strategy '" + kind + "'");
  });
}

nlohmann::json to_json(const PricingStrategy& s) {
  switch (s.kind()) {
    case StrategyKind::Sws: return {{"strategy", "sws"}, {"theta", s.parameter()}};
    case StrategyKind::Fixed: return {{"strategy", "fixed"}, {"price", s.parameter()}};
    case StrategyKind::SuccessFloorOptimal:
      return {{"strategy", "success_floor_optimal"}, {"q_target", s.parameter()}};
  }
  return {};
}

Engine parse_engine(std::string_view text) {
  if (text == "direct") return Engine::Direct;
  if (text == "geometric") return Engine::GeometricJump;
  throw ConfigError("engine '" + std::string(text) + "': expected direct or geometric");
}

TieBreak parse_tie_break(std::string_view text) {
  if (text == "uniform") return TieBreak::UniformAmongAccepting;
  if (text == "lowest_index") return TieBreak::LowestIndex;
  if (text == "max_margin") return TieBreak::MaxMargin;
  throw ConfigError("tie_break '" + std::string(text) + "': expected uniform, lowest_index or max_margin");
}

}  // namespace pricesim
