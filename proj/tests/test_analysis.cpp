#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pricesim/analysis.hpp"
#include "pricesim/errors.hpp"

namespace {

using namespace pricesim;

const auto kUniform = ValuationDistribution::uniform();

std::vector<CostPoint> curve(const std::vector<double>& ms, double (*f)(double)) {
  std::vector<CostPoint> pts;
  for (const double m : ms) pts.push_back({m, f(m)});
  return pts;
}

const std::vector<double> kGrid = {50, 100, 200, 400, 800, 1600, 3200};

TEST(AnalyticCost, Examples) {
  EXPECT_NEAR(analytic_sws_cost(kUniform, 3, 1.0), 11.0 / 6.0, 1e-15);
  EXPECT_NEAR(analytic_sws_cost(kUniform, 1000, 1.0), oracle::harmonic(1000), 1e-11);
  const double b = analytic_sws_cost(ValuationDistribution::beta_a1(2.0), 10000, 1.0);
  EXPECT_GE(b, 198.0);
  EXPECT_LE(b, 200.0);
  EXPECT_NEAR(b, oracle::power_sum(10000, 0.5), 1e-9);
}

TEST(AnalyticCost, ConvergentForHeavyAtomlessTail) {
  const auto d = ValuationDistribution::beta_a1(0.5);
  double prev = 0.0;
  for (const std::size_t m : {10U, 100U, 1000U, 100000U}) {
    const double c = analytic_sws_cost(d, m, 1.0);
    EXPECT_GT(c, prev);
    EXPECT_LT(c, std::numbers::pi * std::numbers::pi / 6.0);
    EXPECT_NEAR(c, oracle::power_sum(m, 2.0), 1e-12);
    prev = c;
  }
}

TEST(FitRegime, ExactPowerLaw) {
  const auto fit = fit_regime(curve(kGrid, [](double m) { return 2.0 * std::sqrt(m); }));
  EXPECT_EQ(fit.regime, Regime::Sublinear);
  EXPECT_NEAR(fit.exponent, 0.5, 0.01);
  EXPECT_NEAR(fit.power_law.r2, 1.0, 1e-12);
}

TEST(FitRegime, Logarithmic) {
  std::vector<double> ms;
  for (double m = 1000; m <= 100000; m *= 2) ms.push_back(m);
  const auto fit = fit_regime(curve(ms, [](double m) { return std::log(m); }));
  EXPECT_EQ(fit.regime, Regime::Log);
  EXPECT_LT(fit.power_law.slope, 0.2);
  EXPECT_NEAR(fit.logarithmic.slope, 1.0, 1e-12);
}

TEST(FitRegime, Constant) {
  const auto fit = fit_regime(curve(kGrid, [](double) { return 1.6; }));
  EXPECT_EQ(fit.regime, Regime::Constant);
  EXPECT_LT(fit.max_dev, 1e-9);
  EXPECT_NEAR(fit.level, 1.6, 1e-15);
}

TEST(FitRegime, Linear) {
  const auto fit = fit_regime(curve(kGrid, [](double m) { return 0.2 * m + 3.0; }));
  EXPECT_EQ(fit.regime, Regime::Linear);
  EXPECT_GT(fit.exponent, 0.9);
}

TEST(FitRegime, UsesTopHalf) {
  const auto fit = fit_regime(curve(kGrid, [](double m) { return m; }));
  EXPECT_EQ(fit.points_used, 4U);
}

TEST(FitRegime, Errors) {
  EXPECT_THROW((void)fit_regime(curve({1, 2, 3}, [](double m) { return m; })), DegenerateInput);
  EXPECT_THROW((void)fit_regime(curve({1, 2, 3, 4}, [](double m) { return m - 2.0; })), DegenerateInput);
  EXPECT_THROW((void)fit_regime(curve({1, 3, 2, 4}, [](double m) { return m; })), DegenerateInput);
}

TEST(FitRegime, AnalyticCostsOnTheDefaultGrid) {
  const auto cost_curve = [](const ValuationDistribution& d) {
    std::vector<CostPoint> pts;
    for (const double m : kGrid) pts.push_back({m, analytic_sws_cost(d, static_cast<std::size_t>(m), 1.0)});
    return fit_regime(pts);
  };
  EXPECT_EQ(cost_curve(ValuationDistribution::beta_a1(0.5)).regime, Regime::Constant);
  EXPECT_EQ(cost_curve(kUniform).regime, Regime::Log);
  EXPECT_EQ(cost_curve(ValuationDistribution::trunc_exp(3.0)).regime, Regime::Log);
  const auto beta2 = cost_curve(ValuationDistribution::beta_a1(2.0));
  EXPECT_EQ(beta2.regime, Regime::Sublinear);
  EXPECT_NEAR(beta2.exponent, 0.5, 0.05);
  const auto gap = cost_curve(ValuationDistribution::gap_shifted(kUniform, 0.2));
  EXPECT_EQ(gap.regime, Regime::Linear);
  EXPECT_NEAR(gap.exponent, 1.0, 0.03);
}

TEST(IntegralCriterion, PowerQuantiles) {
  const auto sq = o1_integral_criterion([](double u) { return u * u; }, 1.0);
  EXPECT_TRUE(sq.finite);
  EXPECT_NEAR(sq.value, 1.0, 1e-6);
  EXPECT_FALSE(o1_integral_criterion([](double u) { return u; }, 1.0).finite);
  EXPECT_FALSE(o1_integral_criterion([](double u) { return std::sqrt(u); }, 1.0).finite);
  const auto half = o1_integral_criterion([](double u) { return u * u; }, 0.5);
  EXPECT_NEAR(half.value, 0.5, 1e-6);
}

TEST(IntegralCriterion, DivergentIncrementsGrowLikeLogTwo) {
  const auto v = o1_integral_criterion([](double u) { return u; }, 1.0);
  for (const double inc : v.increments) EXPECT_NEAR(inc, std::log(2.0), 1e-9);
}

TEST(IntegralCriterion, AgreesWithTailClass) {
  // Bounded SWS cost exactly when the quantile vanishes faster than linearly or
  // the law puts mass at zero.
  for (const auto& [name, d] : oracle::all_families()) {
    const auto p = tail_profile(d);
    const bool bounded = p.tail_class == TailClass::PolySub || p.tail_class == TailClass::Atom;
    const auto v = o1_integral_criterion([&](double u) { return d.quantile(u); }, 1.0);
    EXPECT_EQ(v.finite, bounded) << name;
  }
}

TEST(Summaries, SampleStats) {
  const std::vector<double> same(60, 3.5);
  const auto s = sample_stats(same);
  EXPECT_EQ(s.mean, 3.5);
  EXPECT_EQ(s.stddev, 0.0);
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_NEAR(sample_stats(v).stddev, std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(Summaries, SingleCategory) {
  const auto cfg = MarketConfig::iid(kUniform, 1);
  std::vector<SimulationTrace> traces;
  for (std::uint64_t r = 0; r < 10; ++r) {
    auto rng = RandomStream::for_run(1, r);
    traces.push_back(run(cfg, rng));
  }
  const auto s = summarize(traces, {"uniform", 0.0, 0.0, &cfg});
  EXPECT_EQ(s.cost.mean, 1.0);
  EXPECT_EQ(s.wait.mean, 1.0);
  EXPECT_EQ(s.wait.stddev, 0.0);
  ASSERT_TRUE(s.analytic_cost.has_value());
  EXPECT_EQ(*s.analytic_cost, 1.0);
}

TEST(Summaries, HarmonicCostEveryRun) {
  const auto cfg = MarketConfig::iid(kUniform, 1000);
  std::vector<SimulationTrace> traces;
  for (std::uint64_t r = 0; r < 5; ++r) {
    auto rng = RandomStream::for_run(1, r);
    traces.push_back(run(cfg, rng));
  }
  const auto s = summarize(traces, {"uniform", 0.0, 0.0, &cfg});
  EXPECT_NEAR(s.cost.mean, oracle::harmonic(1000), 1e-9);
  EXPECT_LT(s.cost.stddev, 1e-12);
  EXPECT_EQ(s.n_runs, 5U);
  EXPECT_EQ(s.m, 1000U);
  ASSERT_TRUE(s.analytic_wait.has_value());
  EXPECT_TRUE(s.analytic_wait->exact());
}

}  // namespace
