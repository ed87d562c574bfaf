#include "pricesim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pricesim/errors.hpp"

namespace pricesim {

double analytic_sws_cost(const ValuationDistribution& d, std::size_t m, double theta) {
  double cost = 0.0;
  for (std::size_t j = 1; j <= m; ++j) cost += d.quantile(theta / static_cast<double>(j));
  return cost;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DegenerateInput("least_squares: need at least two paired points");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateInput("least_squares: x has no spread");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

RegimeFit fit_regime(std::span<const CostPoint> points, const RegimeThresholds& rule) {
  if (points.size() < 4) throw DegenerateInput("fit_regime: need at least 4 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].cost > 0.0)) throw DegenerateInput("fit_regime: costs must be positive");
    if (!(points[i].m > 0.0)) throw DegenerateInput("fit_regime: M must be positive");
    if (i > 0 && !(points[i].m > points[i - 1].m)) {
      throw DegenerateInput("fit_regime: M must be strictly increasing");
    }
  }

  // Small-M transients are excluded; the regimes are asymptotic statements.
  const auto top = points.subspan(points.size() / 2);
  std::vector<double> log_m;
  std::vector<double> cost;
  std::vector<double> log_cost;
  for (const auto& p : top) {
    log_m.push_back(std::log(p.m));
    cost.push_back(p.cost);
    log_cost.push_back(std::log(p.cost));
  }

  RegimeFit fit;
  fit.points_used = top.size();
  fit.power_law = least_squares(log_m, log_cost);
  fit.logarithmic = least_squares(log_m, cost);
  fit.level = std::accumulate(cost.begin(), cost.end(), 0.0) / static_cast<double>(cost.size());
  const auto [lo, hi] = std::minmax_element(cost.begin(), cost.end());
  fit.max_dev = std::max(fit.level - *lo, *hi - fit.level);
  fit.relative_spread = (*hi - *lo) / fit.level;

  if (fit.relative_spread < rule.constant_spread) {
    fit.regime = Regime::Constant;
  } else if (fit.logarithmic.slope > 0.0 && fit.logarithmic.r2 > fit.power_law.r2) {
    fit.regime = Regime::Log;
  } else {
    fit.exponent = fit.power_law.slope;
    fit.regime = fit.exponent >= rule.linear_slope ? Regime::Linear : Regime::Sublinear;
  }
  return fit;
}

IntegralVerdict o1_integral_criterion(const std::function<double(double)>& qmax, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("o1_integral_criterion: theta must lie in (0,1]");
  }
  const auto integrand = [&](double u) { return qmax(u) / (u * u); };

  IntegralVerdict verdict;
  double hi = theta;
  for (int k = 1; k <= kIntegralDoublings; ++k) {
    const double lo = hi / 2.0;
    const double piece =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-12);
    verdict.increments.push_back(piece);
    verdict.value += piece;
    hi = lo;
  }

  // Vanishing increments (e.g. an atom at zero makes Q_max = 0 near 0) count as decay.
  constexpr double kNegligible = 1e-300;
  const auto& inc = verdict.increments;
  verdict.finite = true;
  for (std::size_t k = inc.size() - kIntegralTailWindow; k < inc.size(); ++k) {
    if (inc[k] <= kNegligible) continue;
    if (!(inc[k] < kIntegralDecayRatio * inc[k - 1])) {
      verdict.finite = false;
      break;
    }
  }
  return verdict;
}

std::function<double(double)> quantile_max(std::vector<ValuationDistribution> ds) {
  if (ds.empty()) throw std::invalid_argument("quantile_max: no distributions");
  return [ds = std::move(ds)](double u) {
    double best = 0.0;
    for (const auto& d : ds) best = std::max(best, d.quantile(u));
    return best;
  };
}

SampleStats sample_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sample_stats: no values");
  const auto n = static_cast<double>(values.size());
  SampleStats s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

RunSummary summarize(std::span<const SimulationTrace> traces, const SummaryMeta& meta) {
  if (traces.empty()) throw std::invalid_argument("summarize: no traces");
  std::vector<double> costs;
  std::vector<double> waits;
  for (const auto& t : traces) {
    costs.push_back(t.total_cost);
    waits.push_back(static_cast<double>(t.total_wait));
  }

  RunSummary s;
  s.m = traces.front().iterations.size();
  s.alpha = meta.alpha;
  s.epsilon = meta.epsilon;
  s.family = meta.family;
  s.n_runs = traces.size();
  s.cost = sample_stats(costs);
  s.wait = sample_stats(waits);

  if (meta.market != nullptr) {
    const auto& cfg = *meta.market;
    const bool iid = std::all_of(cfg.distributions.begin(), cfg.distributions.end(),
                                 [&](const auto& d) { return d == cfg.distributions.front(); });
    if (iid) {
      if (cfg.strategy.kind() == StrategyKind::Sws) {
        s.analytic_cost =
            analytic_sws_cost(cfg.distributions.front(), cfg.categories(), cfg.strategy.parameter());
      }
      s.analytic_wait = expected_wait_oracle(cfg);
    }
  }
  return s;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Linear: return "Linear";
    case Regime::Sublinear: return "Sublinear";
    case Regime::Log: return "Log";
    case Regime::Constant: return "Constant";
  }
  return "Unknown";
}

}  // namespace pricesim
