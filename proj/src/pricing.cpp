#include "pricesim/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pricesim/format.hpp"

namespace pricesim {

std::size_t GroupedView::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

ActiveSet::ActiveSet(std::span<const ValuationDistribution> categories) {
  group_of_.reserve(categories.size());
  active_.resize(categories.size());
  std::iota(active_.begin(), active_.end(), std::size_t{0});
  for (const auto& law : categories) {
    const auto it = std::find(laws_.begin(), laws_.end(), law);
    if (it == laws_.end()) {
      group_of_.push_back(laws_.size());
      laws_.push_back(law);
      counts_.push_back(1);
    } else {
      const auto g = static_cast<std::size_t>(it - laws_.begin());
      group_of_.push_back(g);
      ++counts_[g];
    }
  }
}

void ActiveSet::remove(std::size_t category) {
  const auto it = std::lower_bound(active_.begin(), active_.end(), category);
  if (it == active_.end() || *it != category) {
    throw std::out_of_range("ActiveSet::remove: category " + std::to_string(category) +
                            " is not active");
  }
  active_.erase(it);
  --counts_[group_of_[category]];
}

PricingStrategy PricingStrategy::sws(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("sws: theta must lie in (0,1]");
  return {StrategyKind::Sws, theta};
}

PricingStrategy PricingStrategy::fixed(double price) {
  if (!(price >= 0.0 && price <= 1.0)) throw std::invalid_argument("fixed: price must lie in [0,1]");
  return {StrategyKind::Fixed, price};
}

PricingStrategy PricingStrategy::success_floor_optimal(double q_target) {
  if (!(q_target > 0.0 && q_target < 1.0)) {
    throw std::invalid_argument("success_floor_optimal: q_target must lie in (0,1)");
  }
  return {StrategyKind::SuccessFloorOptimal, q_target};
}

std::string PricingStrategy::describe() const {
  switch (kind_) {
    case StrategyKind::Sws: return "sws(theta=" + format_double(parameter_) + ")";
    case StrategyKind::Fixed: return "fixed(price=" + format_double(parameter_) + ")";
    case StrategyKind::SuccessFloorOptimal:
      return "success_floor_optimal(q_target=" + format_double(parameter_) + ")";
  }
  return "unknown";
}

double success_probability(double price, GroupedView active) {
  double log_fail = 0.0;
  for (std::size_t g = 0; g < active.laws.size(); ++g) {
    if (active.counts[g] == 0) continue;
    const double accept = active.laws[g].cdf(price);
    if (accept >= 1.0) return 1.0;
    log_fail += static_cast<double>(active.counts[g]) * std::log1p(-accept);
  }
  return -std::expm1(log_fail);
}

double post_price(const PricingStrategy& strategy, GroupedView active) {
  const std::size_t n = active.total();
  if (n == 0) throw std::invalid_argument("post_price: empty active set");

  switch (strategy.kind()) {
    case StrategyKind::Fixed:
      return strategy.parameter();
    case StrategyKind::Sws: {
      const double u = strategy.parameter() / static_cast<double>(n);
      double price = 0.0;
      for (std::size_t g = 0; g < active.laws.size(); ++g) {
        if (active.counts[g] > 0) price = std::max(price, active.laws[g].quantile(u));
      }
      return price;
    }
    case StrategyKind::SuccessFloorOptimal: {
      const double target = strategy.parameter();
      if (success_probability(1.0, active) < target) {
        throw std::domain_error("success_floor_optimal: target unreachable at price 1");
      }
      if (success_probability(0.0, active) >= target) return 0.0;
      // Invariant: q(lo) < target <= q(hi).
      double lo = 0.0;
      double hi = 1.0;
      for (int i = 0; i < kBisectionIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        (success_probability(mid, active) >= target ? hi : lo) = mid;
      }
      return hi;
    }
  }
  return 0.0;
}

namespace {

template <typename F>
auto with_groups(std::span<const ValuationDistribution> active, F&& f) {
  const ActiveSet set(active);
  return f(set.view());
}

}  // namespace

double post_price(const PricingStrategy& strategy, std::span<const ValuationDistribution> active) {
  return with_groups(active, [&](GroupedView v) { return post_price(strategy, v); });
}

double success_probability(double price, std::span<const ValuationDistribution> active) {
  return with_groups(active, [&](GroupedView v) { return success_probability(price, v); });
}

}  // namespace pricesim
