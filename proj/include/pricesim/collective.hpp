#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pricesim/distribution.hpp"

namespace pricesim {

/// A random alpha-fraction of arriving workers refuses any price below the
/// category's floor.
struct HorizontalPlan {
  double alpha = 0.0;          // in [0, 1)
  std::vector<double> floors;  // one per category, each in (0, 1]

  /// Same floor for all `m` categories. Throws std::invalid_argument on bad values.
  static HorizontalPlan broadcast(double alpha, double floor, std::size_t m);

  double min_floor() const;
  void validate() const;
};

/// The lowest epsilon of probability mass in each targeted category is moved to 1.
struct VerticalPlan {
  double epsilon = 0.0;          // in (0, 1)
  double target_fraction = 1.0;  // in (0, 1]
  std::vector<std::size_t> targeted;

  /// Targets the first ceil(target_fraction * m) categories.
  static VerticalPlan first_fraction(double epsilon, double target_fraction, std::size_t m);
  /// Explicit category list; target_fraction becomes |targeted| / m.
  static VerticalPlan explicit_targets(double epsilon, std::vector<std::size_t> targeted,
                                       std::size_t m);

  void validate(std::size_t m) const;
};

/// Wraps category j in HorizontalMix(d_j, alpha, floors[j]).
std::vector<ValuationDistribution> apply_horizontal(const HorizontalPlan& plan,
                                                    std::span<const ValuationDistribution> ds);

struct VerticalOutcome {
  std::vector<ValuationDistribution> distributions;
  /// One message per targeted category whose budget does not exceed its
  /// critical budget; the shift is still applied there.
  std::vector<std::string> warnings;
};

VerticalOutcome apply_vertical(const VerticalPlan& plan, std::span<const ValuationDistribution> ds);

/// Smallest budget eps* such that Q(eps) > 0 for every eps > eps*: the mass at zero.
double critical_budget(const ValuationDistribution& d);

}  // namespace pricesim
