#include "pricesim/collective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pricesim/format.hpp"

namespace pricesim {

HorizontalPlan HorizontalPlan::broadcast(double alpha, double floor, std::size_t m) {
  HorizontalPlan plan{alpha, std::vector<double>(m, floor)};
  plan.validate();
  return plan;
}

double HorizontalPlan::min_floor() const {
  if (floors.empty()) throw std::invalid_argument("HorizontalPlan: no floors");
  return *std::min_element(floors.begin(), floors.end());
}

void HorizontalPlan::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("horizontal: alpha must lie in [0,1)");
  for (const double f : floors) {
    if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("horizontal: floors must lie in (0,1]");
  }
}

VerticalPlan VerticalPlan::first_fraction(double epsilon, double target_fraction, std::size_t m) {
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw std::invalid_argument("vertical: target_fraction must lie in (0,1]");
  }
  // The slack keeps e.g. 0.3 * 10 from rounding up to 4.
  const auto k = static_cast<std::size_t>(std::ceil(target_fraction * static_cast<double>(m) - 1e-9));
  VerticalPlan plan{epsilon, target_fraction, {}};
  plan.targeted.resize(std::min(k, m));
  for (std::size_t i = 0; i < plan.targeted.size(); ++i) plan.targeted[i] = i;
  plan.validate(m);
  return plan;
}

VerticalPlan VerticalPlan::explicit_targets(double epsilon, std::vector<std::size_t> targeted,
                                            std::size_t m) {
  std::sort(targeted.begin(), targeted.end());
  targeted.erase(std::unique(targeted.begin(), targeted.end()), targeted.end());
  const double fraction = m == 0 ? 0.0 : static_cast<double>(targeted.size()) / static_cast<double>(m);
  VerticalPlan plan{epsilon, fraction, std::move(targeted)};
  plan.validate(m);
  return plan;
}

void VerticalPlan::validate(std::size_t m) const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("vertical: epsilon must lie in (0,1)");
  if (targeted.empty()) throw std::invalid_argument("vertical: no targeted categories");
  for (const auto i : targeted) {
    if (i >= m) throw std::invalid_argument("vertical: targeted index out of range");
  }
}

std::vector<ValuationDistribution> apply_horizontal(const HorizontalPlan& plan,
                                                    std::span<const ValuationDistribution> ds) {
  plan.validate();
  if (plan.floors.size() != ds.size()) {
    throw std::invalid_argument("horizontal: need one floor per category");
  }
  std::vector<ValuationDistribution> out;
  out.reserve(ds.size());
  for (std::size_t j = 0; j < ds.size(); ++j) {
    // Identical inputs map to one shared node so the market still groups them.
    if (j > 0 && ds[j] == ds[j - 1] && plan.floors[j] == plan.floors[j - 1]) {
      out.push_back(out.back());
    } else {
      out.push_back(ValuationDistribution::horizontal_mix(ds[j], plan.alpha, plan.floors[j]));
    }
  }
  return out;
}

VerticalOutcome apply_vertical(const VerticalPlan& plan, std::span<const ValuationDistribution> ds) {
  plan.validate(ds.size());
  VerticalOutcome outcome{std::vector<ValuationDistribution>(ds.begin(), ds.end()), {}};
  const ValuationDistribution* last_in = nullptr;
  const ValuationDistribution* last_out = nullptr;
  for (const auto i : plan.targeted) {
    if (last_in != nullptr && *last_in == ds[i]) {
      outcome.distributions[i] = *last_out;
    } else {
      outcome.distributions[i] = ValuationDistribution::vertical_shift(ds[i], plan.epsilon);
    }
    last_in = &ds[i];
    last_out = &outcome.distributions[i];
    const double eps_star = critical_budget(ds[i]);
    if (plan.epsilon <= eps_star) {
      outcome.warnings.push_back("category " + std::to_string(i) + ": epsilon " +
                                 format_double(plan.epsilon) + " <= critical budget " +
                                 format_double(eps_star) + "; floor stays at zero");
    }
  }
  return outcome;
}

double critical_budget(const ValuationDistribution& d) { return tail_profile(d).atom_at_zero; }

}  // namespace pricesim
