#pragma once

#include <memory>
#include <string>

#include "pricesim/random.hpp"

namespace pricesim {

/// Absolute tolerance for comparisons against piecewise-branch thresholds.
inline constexpr double kBranchTolerance = 1e-12;

enum class Family {
  Uniform,
  BetaA1,         // D(x) = x^a
  Beta1B,         // D(x) = 1 - (1-x)^b
  TruncExp,       // exponential(lambda) renormalized to [0,1]
  PointMass,      // all mass at p
  GapShifted,     // g + (1-g) * X_base, support starts at g
  HorizontalMix,  // (1-alpha) * base + alpha * delta_floor
  VerticalShift,  // lowest epsilon of mass moved to 1
};

/// A worker-cost law on [0,1] for one task category.
///
/// Values are immutable and cheap to copy (the parameter tree is shared), so a
/// market of M identical categories holds M handles to one node.  Quantiles use
/// the left-continuous convention Q(u) = inf{x : D(x) >= u} on (0,1].
class ValuationDistribution {
 public:
  static ValuationDistribution uniform();
  static ValuationDistribution beta_a1(double a);
  static ValuationDistribution beta_1b(double b);
  static ValuationDistribution trunc_exp(double lambda);
  static ValuationDistribution point_mass(double p);
  static ValuationDistribution gap_shifted(ValuationDistribution base, double gap);
  /// `floor` may be 0, which places the collective's atom at zero cost.
  static ValuationDistribution horizontal_mix(ValuationDistribution base, double alpha,
                                              double floor);
  static ValuationDistribution vertical_shift(ValuationDistribution base, double epsilon);

  Family family() const noexcept;

  /// The family's scalar parameter: a, b, lambda, p, gap, alpha or epsilon.
  double parameter() const noexcept;
  /// Collective floor of a HorizontalMix; 0 for every other family.
  double floor() const noexcept;
  /// Wrapped law of a composite family, nullptr for leaves.
  const ValuationDistribution* base() const noexcept;

  /// D(x). Total on the real line: 0 left of the support, 1 from x = 1 on.
  double cdf(double x) const;
  /// D(x-), the left limit.
  double cdf_left(double x) const;
  /// Left quantile. Throws std::domain_error unless u is in (0, 1].
  double quantile(double u) const;
  /// Inverse-transform draw Q(U), U uniform on (0,1].
  double sample(RandomStream& rng) const { return quantile(rng.uniform()); }

  friend bool operator==(const ValuationDistribution& lhs, const ValuationDistribution& rhs);

 private:
  struct Node;
  explicit ValuationDistribution(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

enum class TailClass { Gap, Linear, PolySuper, PolySub, Atom, Unknown };

/// Left-tail metadata that selects the SWS cost regime.
struct TailProfile {
  double gap = 0.0;           // inf of the support
  double atom_at_zero = 0.0;  // D(0)
  TailClass tail_class = TailClass::Unknown;
  double exponent = 0.0;  // a for PolySuper / PolySub, 0 otherwise

  friend bool operator==(const TailProfile&, const TailProfile&) = default;
};

/// Computed from family algebra, not by probing the CDF.
TailProfile tail_profile(const ValuationDistribution& d);

std::string to_string(TailClass c);
std::string to_string(Family f);

}  // namespace pricesim
