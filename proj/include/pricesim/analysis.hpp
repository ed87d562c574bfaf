#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pricesim/distribution.hpp"
#include "pricesim/market.hpp"

namespace pricesim {

/// Deterministic SWS cost of an i.i.d. market: sum_{j=1}^{M} Q(theta / j), summed directly.
double analytic_sws_cost(const ValuationDistribution& d, std::size_t m, double theta);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // 1 when y has no variance and the fit is exact
};

/// Ordinary least squares of y on x. Needs at least two distinct x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct CostPoint {
  double m = 0.0;
  double cost = 0.0;
};

enum class Regime { Linear, Sublinear, Log, Constant };

/// Decision rule, applied to the top half of the M grid:
///   Constant  if (max - min) / mean < constant_spread;
///   Log       if cost ~ ln M fits better (higher r2) than ln cost ~ ln M;
///   Linear    if the log-log slope is at least linear_slope;
///   Sublinear otherwise, carrying the log-log slope as exponent.
struct RegimeThresholds {
  double constant_spread = 0.02;
  double linear_slope = 0.9;
};

struct RegimeFit {
  LinearFit power_law;    // ln cost = slope * ln M + intercept
  LinearFit logarithmic;  // cost = slope * ln M + intercept
  double level = 0.0;     // constant model: mean cost
  double max_dev = 0.0;   // constant model: max |cost - level|
  double relative_spread = 0.0;
  Regime regime = Regime::Constant;
  double exponent = 0.0;  // log-log slope for Linear / Sublinear
  std::size_t points_used = 0;
};

/// Throws DegenerateInput for fewer than 4 points, non-increasing M, or a cost <= 0.
RegimeFit fit_regime(std::span<const CostPoint> points, const RegimeThresholds& rule = {});

struct IntegralVerdict {
  bool finite = false;
  double value = 0.0;  // the integral when finite, else the partial sum (a lower bound)
  std::vector<double> increments;  // integral over [theta/2^k, theta/2^(k-1)], k = 1..
};

inline constexpr int kIntegralDoublings = 40;
inline constexpr int kIntegralTailWindow = 10;
inline constexpr double kIntegralDecayRatio = 0.9;

/// Finiteness of the integral of Q_max(u)/u^2 over (0, theta], judged from the
/// decay of its dyadic increments over the last kIntegralTailWindow doublings.
IntegralVerdict o1_integral_criterion(const std::function<double(double)>& qmax, double theta);

/// u -> max_i Q_i(u).
std::function<double(double)> quantile_max(std::vector<ValuationDistribution> ds);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // unbiased; 0 for a single sample
};

SampleStats sample_stats(std::span<const double> values);

struct SummaryMeta {
  std::string family;
  double alpha = 0.0;
  double epsilon = 0.0;
  /// When set and i.i.d., analytic cost / wait oracles are attached.
  const MarketConfig* market = nullptr;
};

struct RunSummary {
  std::size_t m = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::string family;
  std::size_t n_runs = 0;
  SampleStats cost;
  SampleStats wait;
  std::optional<double> analytic_cost;
  std::optional<WaitBounds> analytic_wait;
};

RunSummary summarize(std::span<const SimulationTrace> traces, const SummaryMeta& meta);

std::string to_string(Regime r);

}  // namespace pricesim
