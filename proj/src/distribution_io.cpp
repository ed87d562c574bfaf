#include "pricesim/distribution_io.hpp"

#include <charconv>
#include <stdexcept>

#include "pricesim/errors.hpp"
#include "pricesim/format.hpp"

namespace pricesim {

namespace {

const char* parameter_key(Family f) {
  switch (f) {
    case Family::BetaA1: return "a";
    case Family::Beta1B: return "b";
    case Family::TruncExp: return "lambda";
    case Family::PointMass: return "p";
    case Family::GapShifted: return "gap";
    case Family::HorizontalMix: return "alpha";
    case Family::VerticalShift: return "epsilon";
    case Family::Uniform: return "";
  }
  return "";
}

double number_field(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError("field '" + where + "." + key + "': missing");
  }
  if (!it->is_number()) {
    throw ConfigError("field '" + where + "." + key + "': expected a number");
  }
  return it->get<double>();
}

template <typename Build>
ValuationDistribution guarded(const std::string& where, Build&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field '" + where + "': " + e.what());
  }
}

}  // namespace

nlohmann::json to_json(const ValuationDistribution& d) {
  nlohmann::json j;
  j["family"] = to_string(d.family());
  if (d.family() != Family::Uniform) j[parameter_key(d.family())] = d.parameter();
  if (d.family() == Family::HorizontalMix) j["floor"] = d.floor();
  if (const auto* base = d.base()) j["base"] = to_json(*base);
  return j;
}

ValuationDistribution distribution_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("field '" + where + "': expected an object");
  const auto fam = j.find("family");
  if (fam == j.end() || !fam->is_string()) {
    throw ConfigError("field '" + where + ".family': expected a family name string");
  }
  const std::string name = fam->get<std::string>();
  auto base = [&]() {
    const auto it = j.find("base");
    if (it == j.end()) throw ConfigError("field '" + where + ".base': missing");
    return distribution_from_json(*it, where + ".base");
  };

  if (name == "uniform") return ValuationDistribution::uniform();
  if (name == "beta_a1") {
    const double a = number_field(j, "a", where);
    return guarded(where, [&] { return ValuationDistribution::beta_a1(a); });
  }
  if (name == "beta_1b") {
    const double b = number_field(j, "b", where);
    return guarded(where, [&] { return ValuationDistribution::beta_1b(b); });
  }
  if (name == "trunc_exp") {
    const double lambda = number_field(j, "lambda", where);
    return guarded(where, [&] { return ValuationDistribution::trunc_exp(lambda); });
  }
  if (name == "point_mass") {
    const double p = number_field(j, "p", where);
    return guarded(where, [&] { return ValuationDistribution::point_mass(p); });
  }
  if (name == "gap_shifted") {
    const double g = number_field(j, "gap", where);
    auto b = base();
    return guarded(where, [&] { return ValuationDistribution::gap_shifted(b, g); });
  }
  if (name == "horizontal_mix") {
    const double alpha = number_field(j, "alpha", where);
    const double floor = number_field(j, "floor", where);
    auto b = base();
    return guarded(where, [&] { return ValuationDistribution::horizontal_mix(b, alpha, floor); });
  }
  if (name == "vertical_shift") {
    const double eps = number_field(j, "epsilon", where);
    auto b = base();
    return guarded(where, [&] { return ValuationDistribution::vertical_shift(b, eps); });
  }
  throw ConfigError("field '" + where + ".family': unknown family '" + name + "'");
}

ValuationDistribution parse_family_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  double value = 0.0;
  const bool has_value = colon != std::string_view::npos;
  if (has_value) {
    const std::string_view num = text.substr(colon + 1);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
      throw ConfigError("family '" + std::string(text) + "': bad numeric parameter");
    }
  }
  auto need_value = [&]() {
    if (!has_value) {
      throw ConfigError("family '" + std::string(text) + "': expected '" + std::string(name) +
                        ":<value>'");
    }
  };
  const std::string where = "--family " + std::string(text);
  if (name == "uniform") return ValuationDistribution::uniform();
  need_value();
  if (name == "beta_a1") return guarded(where, [&] { return ValuationDistribution::beta_a1(value); });
  if (name == "beta_1b") return guarded(where, [&] { return ValuationDistribution::beta_1b(value); });
  if (name == "trunc_exp") {
    return guarded(where, [&] { return ValuationDistribution::trunc_exp(value); });
  }
  if (name == "pointmass" || name == "point_mass") {
    return guarded(where, [&] { return ValuationDistribution::point_mass(value); });
  }
  if (name == "gap_shifted") {
    return guarded(where, [&] {
      return ValuationDistribution::gap_shifted(ValuationDistribution::uniform(), value);
    });
  }
  throw ConfigError("unknown family '" + std::string(name) + "'");
}

std::string family_name(const ValuationDistribution& d) { return to_string(d.family()); }

std::string param_string(const ValuationDistribution& d) {
  std::string out;
  if (const auto* base = d.base()) {
    const std::string inner = param_string(*base);
    out = "base=" + family_name(*base) + (inner.empty() ? "" : "(" + inner + ")") + ";";
  }
  if (d.family() == Family::Uniform) return out;
  out += std::string(parameter_key(d.family())) + "=" + format_double(d.parameter());
  if (d.family() == Family::HorizontalMix) out += ";floor=" + format_double(d.floor());
  return out;
}

}  // namespace pricesim
