#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "pricesim/distribution.hpp"

namespace pricesim {

/// Descriptor form used in experiment configs, e.g.
/// `{"family": "horizontal_mix", "base": {"family": "uniform"}, "alpha": 0.5, "floor": 0.2}`.
nlohmann::json to_json(const ValuationDistribution& d);

/// Inverse of to_json. `where` names the config field for diagnostics; throws ConfigError.
ValuationDistribution distribution_from_json(const nlohmann::json& j,
                                             const std::string& where = "family");

/// Command-line shorthand: `uniform`, `beta_a1:2`, `beta_1b:0.5`, `trunc_exp:3`,
/// `pointmass:0.5`, `gap_shifted:0.2` (uniform base). Throws ConfigError.
ValuationDistribution parse_family_spec(std::string_view text);

/// Outermost family name, as written to the `family` CSV column.
std::string family_name(const ValuationDistribution& d);

/// Parameters as `key=value` pairs joined by ';' (no commas, CSV-safe).
/// Bases of composite laws are written inline, e.g. `base=beta_a1(a=2);gap=0.2`.
std::string param_string(const ValuationDistribution& d);

}  // namespace pricesim
