#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pricesim/distribution.hpp"

namespace pricesim {

/// Active categories summarized as (law, multiplicity) groups. Prices and
/// success probabilities depend only on this multiset, so i.i.d. markets cost
/// O(1) per iteration instead of O(|A_t|).
struct GroupedView {
  std::span<const ValuationDistribution> laws;
  std::span<const std::size_t> counts;

  std::size_t total() const noexcept;
};

/// The active set A_t of a running market.
class ActiveSet {
 public:
  /// All categories active; identical laws share one group.
  explicit ActiveSet(std::span<const ValuationDistribution> categories);

  std::size_t size() const noexcept { return active_.size(); }
  bool empty() const noexcept { return active_.empty(); }

  std::size_t group_count() const noexcept { return laws_.size(); }
  std::size_t group_of(std::size_t category) const { return group_of_.at(category); }
  const std::vector<ValuationDistribution>& group_laws() const noexcept { return laws_; }

  /// Active category indices, ascending.
  const std::vector<std::size_t>& categories() const noexcept { return active_; }

  /// Throws std::out_of_range if `category` is not active.
  void remove(std::size_t category);

  GroupedView view() const noexcept { return {laws_, counts_}; }

 private:
  std::vector<ValuationDistribution> laws_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> group_of_;
  std::vector<std::size_t> active_;
};

enum class StrategyKind { Sws, Fixed, SuccessFloorOptimal };

/// Rule that maps the active set to the posted price p_t.
class PricingStrategy {
 public:
  /// Stochastic wage suppression: p_t = max_i Q_i(theta / |A_t|), theta in (0,1].
  static PricingStrategy sws(double theta = 1.0);
  static PricingStrategy fixed(double price);
  /// Cheapest price whose iteration success probability reaches q_target.
  static PricingStrategy success_floor_optimal(double q_target);

  StrategyKind kind() const noexcept { return kind_; }
  /// theta, the fixed price, or q_target.
  double parameter() const noexcept { return parameter_; }

  std::string describe() const;

  friend bool operator==(const PricingStrategy&, const PricingStrategy&) = default;

 private:
  PricingStrategy(StrategyKind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  StrategyKind kind_;
  double parameter_;
};

/// Bisection iterations used by SuccessFloorOptimal on [0, 1].
inline constexpr int kBisectionIterations = 60;

/// Throws std::invalid_argument on an empty active set and std::domain_error
/// when SuccessFloorOptimal cannot reach its target even at p = 1.
double post_price(const PricingStrategy& strategy, GroupedView active);
double post_price(const PricingStrategy& strategy, std::span<const ValuationDistribution> active);

/// q = 1 - prod_i (1 - D_i(p)).
double success_probability(double price, GroupedView active);
double success_probability(double price, std::span<const ValuationDistribution> active);

}  // namespace pricesim
