#include "pricesim/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pricesim/errors.hpp"

namespace pricesim {

void MarketConfig::validate() const {
  if (distributions.empty()) throw ConfigError("market: M must be at least 1");
  if (wait_cap < distributions.size()) throw ConfigError("market: wait_cap must be >= M");
}

MarketConfig MarketConfig::iid(const ValuationDistribution& law, std::size_t m,
                               PricingStrategy strategy) {
  MarketConfig cfg;
  cfg.distributions.assign(m, law);
  cfg.strategy = strategy;
  return cfg;
}

namespace {

struct Accepted {
  std::size_t category;
  double valuation;  // only filled when the tie-break needs it
};

// Index in [0, k) from U in (0, 1].
std::size_t uniform_index(RandomStream& rng, std::size_t k) {
  const auto idx = static_cast<std::size_t>(std::ceil(rng.uniform() * static_cast<double>(k)));
  return std::clamp<std::size_t>(idx, 1, k) - 1;
}

std::size_t choose(const std::vector<Accepted>& accepted, TieBreak rule, double price,
                   RandomStream& rng) {
  switch (rule) {
    case TieBreak::UniformAmongAccepting:
      return accepted[uniform_index(rng, accepted.size())].category;
    case TieBreak::LowestIndex:
      return std::min_element(accepted.begin(), accepted.end(),
                              [](const Accepted& a, const Accepted& b) {
                                return a.category < b.category;
                              })
          ->category;
    case TieBreak::MaxMargin: {
      // Accepted entries arrive in ascending category order, so strict > keeps
      // the lowest index among equal margins.
      const Accepted* best = &accepted.front();
      for (const auto& a : accepted) {
        if (price - a.valuation > price - best->valuation) best = &a;
      }
      return best->category;
    }
  }
  return accepted.front().category;
}

// Whole valuation vectors, one per arriving worker, until someone accepts.
std::uint64_t direct_arrivals(const MarketConfig& cfg, const ActiveSet& active, double price,
                              std::size_t t, RandomStream& rng, std::vector<Accepted>& accepted) {
  const auto& laws = active.group_laws();
  for (std::uint64_t n = 1;; ++n) {
    if (n > cfg.wait_cap) throw WaitCapExceeded(t);
    accepted.clear();
    for (const std::size_t i : active.categories()) {
      const double v = laws[active.group_of(i)].sample(rng);
      if (v <= price) accepted.push_back({i, v});
    }
    if (!accepted.empty()) return n;
  }
}

// Deferral count from Geometric(q) by inversion, then the accepting worker's
// acceptance pattern conditioned on being nonempty (by rejection). Acceptance
// indicators are generated by geometric skipping at the largest per-category
// rate and thinned down to each category's own rate, so an attempt costs
// O(1 + |A_t| * max_i D_i(p)) instead of O(|A_t|).
std::uint64_t geometric_arrivals(const MarketConfig& cfg, const ActiveSet& active, double price,
                                 double q, std::size_t t, RandomStream& rng,
                                 std::vector<double>& accept_rate,
                                 std::vector<Accepted>& accepted) {
  std::uint64_t wait = 1;
  if (q < 1.0) {
    const double draws = std::ceil(std::log(rng.uniform()) / std::log1p(-q));
    if (draws > static_cast<double>(cfg.wait_cap)) throw WaitCapExceeded(t);
    wait = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(draws));
  }

  const auto& laws = active.group_laws();
  accept_rate.assign(laws.size(), 0.0);
  double max_rate = 0.0;
  for (std::size_t g = 0; g < laws.size(); ++g) {
    accept_rate[g] = laws[g].cdf(price);
    max_rate = std::max(max_rate, accept_rate[g]);
  }

  const auto& cats = active.categories();
  const auto n = static_cast<double>(cats.size());
  const double log_skip = max_rate < 1.0 ? std::log1p(-max_rate) : 0.0;
  const bool need_valuation = cfg.tie_break == TieBreak::MaxMargin;
  do {
    accepted.clear();
    double pos = -1.0;
    for (;;) {
      // Failures before the next candidate ~ Geometric_0(max_rate).
      const double skip = max_rate < 1.0 ? std::floor(std::log(rng.uniform()) / log_skip) : 0.0;
      pos += skip + 1.0;
      if (pos >= n) break;
      const std::size_t i = cats[static_cast<std::size_t>(pos)];
      const std::size_t g = active.group_of(i);
      const double ratio = accept_rate[g] / max_rate;
      if (ratio < 1.0 && rng.uniform() > ratio) continue;
      // Given acceptance, the valuation is Q(U * D(p)).
      const double v = need_valuation ? laws[g].quantile(rng.uniform() * accept_rate[g]) : 0.0;
      accepted.push_back({i, v});
    }
  } while (accepted.empty());
  return wait;
}

}  // namespace

SimulationTrace run(const MarketConfig& cfg, RandomStream& rng) {
  cfg.validate();
  const std::size_t m = cfg.categories();
  ActiveSet active(cfg.distributions);

  SimulationTrace trace;
  trace.iterations.reserve(m);
  std::vector<Accepted> accepted;
  std::vector<double> accept_rate;

  for (std::size_t t = 1; !active.empty(); ++t) {
    const double price = post_price(cfg.strategy, active.view());
    const double q = success_probability(price, active.view());
    if (!(q > 0.0)) throw ZeroSuccessProbability(t, price);

    const std::uint64_t wait =
        cfg.engine == Engine::Direct
            ? direct_arrivals(cfg, active, price, t, rng, accepted)
            : geometric_arrivals(cfg, active, price, q, t, rng, accept_rate, accepted);
    const std::size_t done = choose(accepted, cfg.tie_break, price, rng);

    trace.iterations.push_back({t, active.size(), price, wait, done});
    trace.total_wait += wait;
    trace.total_cost += price;
    active.remove(done);
  }
  return trace;
}

namespace {

struct QRange {
  double min = std::numeric_limits<double>::infinity();
  double max = 0.0;
  double price_at_min = 0.0;
};

// Visits every count vector c with sum c = n and c_g <= totals_g.
template <typename Visit>
void for_each_composition(std::vector<std::size_t>& counts, const std::vector<std::size_t>& totals,
                          const std::vector<std::size_t>& suffix, std::size_t g, std::size_t left,
                          Visit&& visit) {
  if (g + 1 == totals.size()) {
    counts[g] = left;
    visit();
    return;
  }
  const std::size_t lo = left > suffix[g + 1] ? left - suffix[g + 1] : 0;
  const std::size_t hi = std::min(totals[g], left);
  for (std::size_t c = lo; c <= hi; ++c) {
    counts[g] = c;
    for_each_composition(counts, totals, suffix, g + 1, left - c, visit);
  }
}

constexpr double kOracleBudget = 5e7;

}  // namespace

WaitBounds expected_wait_oracle(const MarketConfig& cfg) {
  cfg.validate();
  const ActiveSet all(cfg.distributions);
  const auto& laws = all.group_laws();
  const std::size_t groups = laws.size();
  const std::size_t m = cfg.categories();

  std::vector<std::size_t> totals(groups, 0);
  for (std::size_t i = 0; i < m; ++i) ++totals[all.group_of(i)];
  std::vector<std::size_t> suffix(groups + 1, 0);
  for (std::size_t g = groups; g-- > 0;) suffix[g] = suffix[g + 1] + totals[g];

  // Rough count of multisets visited, to refuse hopeless enumerations early.
  double work = 0.0;
  for (std::size_t n = 1; n <= m && work <= kOracleBudget; ++n) {
    double ways = 1.0;
    for (std::size_t g = 1; g < groups; ++g) ways *= static_cast<double>(n + g) / static_cast<double>(g);
    work += ways;
  }
  if (work > kOracleBudget) {
    throw std::invalid_argument("expected_wait_oracle: too many distinct laws to enumerate");
  }

  WaitBounds bounds;
  std::vector<std::size_t> counts(groups, 0);
  for (std::size_t n = m; n >= 1; --n) {
    const std::size_t t = m - n + 1;
    QRange range;
    for_each_composition(counts, totals, suffix, 0, n, [&] {
      const GroupedView view{laws, counts};
      const double price = post_price(cfg.strategy, view);
      const double q = success_probability(price, view);
      if (q < range.min) {
        range.min = q;
        range.price_at_min = price;
      }
      range.max = std::max(range.max, q);
    });
    if (!(range.min > 0.0)) throw ZeroSuccessProbability(t, range.price_at_min);
    bounds.lower += 1.0 / range.max;
    bounds.upper += 1.0 / range.min;
  }
  return bounds;
}

std::vector<double> success_profile(const MarketConfig& cfg) {
  cfg.validate();
  const ActiveSet all(cfg.distributions);
  if (all.group_count() != 1) {
    throw std::invalid_argument("success_profile: categories are not identically distributed");
  }
  const std::size_t m = cfg.categories();
  std::vector<double> q(m);
  std::size_t count = 0;
  for (std::size_t t = 1; t <= m; ++t) {
    count = m - t + 1;
    const GroupedView view{all.group_laws(), std::span<const std::size_t>(&count, 1)};
    q[t - 1] = success_probability(post_price(cfg.strategy, view), view);
  }
  return q;
}

double wait_variance_oracle(const MarketConfig& cfg) {
  double var = 0.0;
  for (const double q : success_profile(cfg)) {
    if (!(q > 0.0)) return std::numeric_limits<double>::infinity();
    var += (1.0 - q) / (q * q);
  }
  return var;
}

std::vector<double> replay_success_probabilities(const MarketConfig& cfg,
                                                 const SimulationTrace& trace) {
  ActiveSet active(cfg.distributions);
  std::vector<double> q;
  q.reserve(trace.iterations.size());
  for (const auto& it : trace.iterations) {
    const double price = post_price(cfg.strategy, active.view());
    q.push_back(success_probability(price, active.view()));
    active.remove(it.completed_category);
  }
  return q;
}

std::string to_string(TieBreak t) {
  switch (t) {
    case TieBreak::UniformAmongAccepting: return "uniform";
    case TieBreak::LowestIndex: return "lowest_index";
    case TieBreak::MaxMargin: return "max_margin";
  }
  return "unknown";
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Direct: return "direct";
    case Engine::GeometricJump: return "geometric";
  }
  return "unknown";
}

}  // namespace pricesim
